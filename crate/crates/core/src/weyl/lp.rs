//! Exact simplex on small dense programs.

use num_traits::{Signed, Zero};

use crate::exactnum::rational::{q, Q};

/// Maximize `c·z` subject to `A z ≤ b`, `z ≥ 0`, with `b ≥ 0` so that the
/// origin is feasible. Returns the optimum and an optimal point, or `None`
/// when unbounded. Bland's rule avoids cycling.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Option<(Q, Vec<Q>)> {
    let n = c.len();
    let m = a.len();
    assert!(b.iter().all(|x| !x.is_negative()));
    // tableau rows: [A | I | b], objective row: [-c | 0 | 0]
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let mut r = row.clone();
        r.resize(n + m, Q::zero());
        r[n + i] = q(1);
        r.push(b[i].clone());
        t.push(r);
    }
    let mut obj: Vec<Q> = c.iter().map(|x| -x.clone()).collect();
    obj.resize(width, Q::zero());
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (pr, _) = leave?;
        let piv = t[pr][enter].clone();
        for v in t[pr].iter_mut() {
            *v /= &piv;
        }
        let prow = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }
    let mut z = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            z[bv] = t[i][width - 1].clone();
        }
    }
    Some((t[m][width - 1].clone(), z))
}

/// Largest `t ∈ [0, 1]` with `r·x ≥ t` for every row `r` and `|x_i| ≤ 1`,
/// together with a maximizing `x`.
pub fn max_margin(rows: &[Vec<Q>], k: usize) -> (Q, Vec<Q>) {
    let n = 2 * k + 1;
    let mut c = vec![Q::zero(); n];
    c[2 * k] = q(1);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in rows {
        let mut row = vec![Q::zero(); n];
        for i in 0..k {
            row[i] = -r[i].clone();
            row[k + i] = r[i].clone();
        }
        row[2 * k] = q(1);
        a.push(row);
        b.push(Q::zero());
    }
    for i in 0..n {
        let mut row = vec![Q::zero(); n];
        row[i] = q(1);
        a.push(row);
        b.push(q(1));
    }
    let (val, z) = maximize(&c, &a, &b).expect("box constraints bound the program");
    let x = (0..k).map(|i| &z[i] - &z[k + i]).collect();
    (val, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_program() {
        // max x + y, x + 2y <= 4, 3x + y <= 6
        let (v, z) = maximize(&[q(1), q(1)], &[vec![q(1), q(2)], vec![q(3), q(1)]], &[q(4), q(6)]).unwrap();
        assert_eq!(v, Q::new(14.into(), 5.into()));
        assert_eq!(z, vec![Q::new(8.into(), 5.into()), Q::new(6.into(), 5.into())]);
    }

    #[test]
    fn margins() {
        // x > 0 and y > 0: margin 1 at (1, 1)
        let (t, x) = max_margin(&[vec![q(1), q(0)], vec![q(0), q(1)]], 2);
        assert_eq!(t, q(1));
        assert_eq!(x, vec![q(1), q(1)]);
        // x > 0 and -x > 0: margin 0
        let (t, _) = max_margin(&[vec![q(1), q(0)], vec![q(-1), q(0)]], 2);
        assert_eq!(t, q(0));
    }
}
