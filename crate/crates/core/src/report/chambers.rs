//! Chamber reports: JSON with certified line angles and a planar SVG.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::file::{ActionFile, SCHEMA_VERSION};
use crate::actions::validate_named;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, sqrt_bounds, Interval, Q};
use crate::weyl::{lyapunov_data, weyl_chambers, LyapunovFunctional};

/// Fractional bits of the published sine/cosine enclosures.
const ANGLE_BITS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enclosure {
    pub lo: String,
    pub hi: String,
}

impl Enclosure {
    fn of(iv: &Interval) -> Self {
        let r = iv.round_out(ANGLE_BITS);
        Enclosure {
            lo: format_rational(&r.lo),
            hi: format_rational(&r.hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSummary {
    /// Coarse classes on this hyperplane with their sign relative to the first.
    pub classes: Vec<(usize, i32)>,
    /// Values of the leading functional on the generators, 12 decimals.
    pub normal: Vec<String>,
    /// Rank 2: the line as the oriented direction `(-χ(e_2), χ(e_1))`,
    /// with the leading functional positive on its left.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cos: Option<Enclosure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sin: Option<Enclosure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_degrees: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChamberEntry {
    pub witness: Vec<i64>,
    pub hyperplane_signs: Vec<i32>,
    pub class_signs: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChambersReport {
    pub schema_version: u32,
    pub name: String,
    pub rank: usize,
    /// Members of each coarse class, indexing the nonzero functionals.
    pub classes: Vec<Vec<usize>>,
    pub lines: Vec<LineSummary>,
    pub chambers: Vec<ChamberEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    directions: Vec<(f64, f64)>,
}

fn square(iv: &Interval) -> Interval {
    let (a, b) = (iv.lo.abs(), iv.hi.abs());
    let big = if a > b { a.clone() } else { b.clone() };
    let small = if iv.contains_zero() {
        Q::zero()
    } else if a < b {
        a
    } else {
        b
    };
    Interval::new(&small * &small, &big * &big)
}

fn clamp_unit(iv: Interval) -> Interval {
    let one = Q::from_integer(1.into());
    let lo = if iv.lo < -one.clone() { -one.clone() } else { iv.lo };
    let hi = if iv.hi > one { one } else { iv.hi };
    Interval::new(lo, hi)
}

/// Certified `(cos, sin)` of the direction `(-χ(e_2), χ(e_1))`.
fn line_angle(f: &LyapunovFunctional, cap_bits: u32) -> Option<(Interval, Interval)> {
    let mut bits = 64;
    loop {
        let e = f.enclosures(bits);
        let (dx, dy) = (e[1].neg(), e[0].clone());
        let n2 = square(&dx).add(&square(&dy));
        if n2.lo.is_positive() {
            let lo = sqrt_bounds(&n2.lo, bits).0;
            let hi = sqrt_bounds(&n2.hi, bits).1;
            let norm = Interval::new(lo, hi);
            if norm.lo.is_positive() {
                let c = dx.div(&norm)?;
                let s = dy.div(&norm)?;
                return Some((clamp_unit(c), clamp_unit(s)));
            }
        }
        if bits >= cap_bits {
            return None;
        }
        bits = (bits * 2).min(cap_bits);
    }
}

/// Chamber decomposition of a file's action, for display.
pub fn chambers_report(file: &ActionFile, cfg: &Config) -> Result<ChambersReport> {
    let gens = super::audit::integer_generators(file)?;
    let action = validate_named(gens, &file.name)?;
    let rank = action.rank();
    let data = lyapunov_data(&action.rational_generators(), cfg.precision_cap_bits);
    let nonzero: Vec<LyapunovFunctional> = data.functionals.into_iter().filter(|f| !f.is_zero()).collect();
    let mut notes = Vec::new();
    if nonzero.is_empty() {
        notes.push("every Lyapunov functional vanishes; the whole space is one chamber".to_string());
        let mut e1 = vec![0; rank];
        e1[0] = 1;
        return Ok(ChambersReport {
            schema_version: SCHEMA_VERSION,
            name: file.name.clone(),
            rank,
            classes: vec![],
            lines: vec![],
            chambers: vec![ChamberEntry {
                witness: e1,
                hyperplane_signs: vec![],
                class_signs: vec![],
            }],
            notes,
            directions: vec![],
        });
    }
    let dec = weyl_chambers(&nonzero, cfg)?;
    let mut lines = Vec::new();
    let mut directions = Vec::new();
    for h in &dec.hyperplanes {
        let f = &nonzero[dec.classes[h.leading_class()].representative()];
        let approx = f.approx();
        let mut line = LineSummary {
            classes: h.classes.clone(),
            normal: approx.iter().map(|x| format!("{x:.12}")).collect(),
            cos: None,
            sin: None,
            angle_degrees: None,
        };
        if rank == 2 {
            let (c, s) = line_angle(f, cfg.precision_cap_bits).ok_or(Error::PrecisionExhausted(cfg.precision_cap_bits))?;
            let (dx, dy) = (-approx[1], approx[0]);
            let n = dx.hypot(dy);
            directions.push((dx / n, dy / n));
            line.angle_degrees = Some(format!("{:.6}", dy.atan2(dx).to_degrees()));
            line.cos = Some(Enclosure::of(&c));
            line.sin = Some(Enclosure::of(&s));
        }
        lines.push(line);
    }
    Ok(ChambersReport {
        schema_version: SCHEMA_VERSION,
        name: file.name.clone(),
        rank,
        classes: dec.classes.iter().map(|c| c.members.clone()).collect(),
        lines,
        chambers: dec
            .chambers
            .iter()
            .map(|c| ChamberEntry {
                witness: c.witness.clone(),
                hyperplane_signs: c.hyperplane_signs.clone(),
                class_signs: c.class_signs.clone(),
            })
            .collect(),
        notes,
        directions,
    })
}

impl ChambersReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Unit-disk diagram of the lines and chamber witnesses (rank 2 only).
    pub fn to_svg(&self) -> Result<String> {
        if self.rank != 2 {
            return Err(Error::RankUnsupported(self.rank));
        }
        const SIZE: f64 = 400.0;
        const C: f64 = 200.0;
        const R: f64 = 180.0;
        let px = |x: f64, y: f64, r: f64| (C + r * x, C - r * y);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(
            s,
            r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="black"/></marker></defs>"#
        );
        let _ = writeln!(s, r#"<title>{}</title>"#, escape(&self.name));
        let _ = writeln!(
            s,
            r##"<circle cx="{C:.3}" cy="{C:.3}" r="{R:.3}" fill="#f7f7f7" stroke="#444" stroke-width="1"/>"##
        );
        for (j, &(dx, dy)) in self.directions.iter().enumerate() {
            let (x0, y0) = px(-dx, -dy, R);
            let (x1, y1) = px(dx, dy, R);
            let _ = writeln!(
                s,
                r#"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="black" stroke-width="1.5" marker-end="url(#arrow)"/>"#
            );
            let (lx, ly) = px(dx, dy, R + 12.0);
            let members: Vec<String> = self.lines[j].classes.iter().map(|(c, _)| c.to_string()).collect();
            let _ = writeln!(
                s,
                r#"<text x="{lx:.3}" y="{ly:.3}" font-family="monospace" font-size="11" text-anchor="middle" dominant-baseline="middle">L{j} [{}]</text>"#,
                members.join(",")
            );
        }
        for (m, c) in self.chambers.iter().enumerate() {
            let (wx, wy) = (c.witness[0] as f64, c.witness[1] as f64);
            let n = wx.hypot(wy);
            let (x, y) = px(wx / n, wy / n, R * 0.62);
            let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#c0392b"/>"##);
            let signs: String = c.class_signs.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect();
            let _ = writeln!(
                s,
                r#"<text x="{x:.3}" y="{:.3}" font-family="monospace" font-size="10" text-anchor="middle">C{m} ({},{}) {signs}</text>"#,
                y + 14.0,
                c.witness[0],
                c.witness[1]
            );
        }
        s.push_str("</svg>\n");
        Ok(s)
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
