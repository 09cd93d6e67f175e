//! Seeded random inputs for property checks and the self-test.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::IntMatrix;

/// Random `d × d` integer matrix of determinant ±1 with entries bounded by
/// `bound`, built from a signed permutation by row transvections.
pub fn random_unimodular<R: Rng>(rng: &mut R, d: usize, bound: i64) -> IntMatrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut rows: Vec<Vec<i64>> = vec![vec![0; d]; d];
    for (i, &p) in perm.iter().enumerate() {
        rows[i][p] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    if d >= 2 {
        let steps = rng.gen_range(d..=3 * d);
        for _ in 0..steps {
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let cand: Vec<i64> = (0..d).map(|c| rows[i][c] + s * rows[j][c]).collect();
            if cand.iter().all(|x| x.abs() <= bound) {
                rows[i] = cand;
            }
        }
    }
    IntMatrix::from_vecs(rows)
}

fn signed_pow(m: &IntMatrix, e: i64, neg: bool) -> IntMatrix {
    let p = m.pow_signed(e);
    if neg {
        IntMatrix::new(p.rows().iter().map(|r| r.iter().map(|x| -x).collect()).collect())
    } else {
        p
    }
}

fn block_unipotent_extension(x: &IntMatrix) -> IntMatrix {
    let m = x.nrows();
    let mut rows = vec![vec![BigInt::from(0); 2 * m]; 2 * m];
    for i in 0..m {
        for j in 0..m {
            rows[i][j] = x.get(i, j).clone();
            rows[m + i][m + j] = x.get(i, j).clone();
        }
        rows[m + i][i] = BigInt::from(1);
    }
    IntMatrix::new(rows)
}

/// Commuting unimodular pair of dimension at most `max_dim`, mixing
/// semisimple blocks, block-unipotent extensions and unipotent partners of
/// scalar blocks, conjugated by a random unimodular change of basis.
pub fn random_commuting_pair<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> (IntMatrix, IntMatrix) {
    let d = rng.gen_range(1..=max_dim);
    let mut left = d;
    let (mut a_blocks, mut b_blocks) = (Vec::new(), Vec::new());
    while left > 0 {
        let kind = rng.gen_range(0..4);
        if kind == 1 && left >= 2 {
            let m = rng.gen_range(1..=(left / 2).min(3));
            let x = random_unimodular(rng, m, bound);
            let w = block_unipotent_extension(&x);
            let e = rng.gen_range(-1..=2);
            b_blocks.push(signed_pow(&w, e, rng.gen_bool(0.3)));
            a_blocks.push(w);
            left -= 2 * m;
        } else if kind == 2 && left >= 2 {
            let m = rng.gen_range(2..=left.min(3));
            let sign = rng.gen_bool(0.5);
            a_blocks.push(signed_pow(&IntMatrix::identity(m), 1, sign));
            let mut rows: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
            if rng.gen_bool(0.6) {
                rows[1][0] = 1;
                b_blocks.push(IntMatrix::from_vecs(rows));
            } else {
                b_blocks.push(random_unimodular(rng, m, bound));
            }
            left -= m;
        } else {
            let m = rng.gen_range(1..=left.min(3));
            let x = random_unimodular(rng, m, bound);
            let e = rng.gen_range(-1..=2);
            b_blocks.push(signed_pow(&x, e, rng.gen_bool(0.3)));
            a_blocks.push(x);
            left -= m;
        }
    }
    let (a, b) = (IntMatrix::block_diag(&a_blocks), IntMatrix::block_diag(&b_blocks));
    let p = random_unimodular(rng, d, 1);
    let pinv = p.inverse_unimodular().expect("unimodular");
    let conj = |m: &IntMatrix| p.mul(m).mul(&pinv);
    let (a, b) = (conj(&a), conj(&b));
    debug_assert_eq!(a.mul(&b), b.mul(&a));
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, ToPrimitive};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_entry(m: &IntMatrix) -> i64 {
        m.rows()
            .iter()
            .flatten()
            .map(|x| x.abs().to_i64().unwrap_or(i64::MAX))
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn pairs_commute_and_are_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (a, b) = random_commuting_pair(&mut rng, 6, 3);
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.det().abs(), BigInt::from(1));
            assert_eq!(b.det().abs(), BigInt::from(1));
        }
        let u = random_unimodular(&mut rng, 3, 3);
        assert!(max_entry(&u) <= 3);
    }
}
