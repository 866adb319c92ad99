use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::presentation::GroupPresentation;
use crate::matrix::IntMatrix;

/// `ℤ^free ⊕ ℤ/d_1 ⊕ … ⊕ ℤ/d_k` with `d_i | d_{i+1}` and every `d_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianDescriptor {
    pub free_rank: usize,
    #[serde(with = "crate::bigint_serde::vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianDescriptor {
    pub fn free(rank: usize) -> Self {
        AbelianDescriptor { free_rank: rank, torsion: Vec::new() }
    }

    /// Reads the descriptor off the invariant factors of a relation matrix
    /// with `generators` columns.
    pub fn from_invariant_factors(generators: usize, factors: &[BigInt]) -> Self {
        let nonzero = factors.iter().filter(|d| !d.is_zero()).count();
        AbelianDescriptor {
            free_rank: generators - nonzero,
            torsion: factors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect(),
        }
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// `|Hom(A, ℤ/m)| = m^free · Π gcd(d_i, m)`.
    pub fn hom_count_to_cyclic(&self, m: u64) -> BigInt {
        let m = BigInt::from(m);
        let mut count = num_traits::pow(m.clone(), self.free_rank);
        for d in &self.torsion {
            count *= d.gcd(&m);
        }
        count
    }
}

impl fmt::Display for AbelianDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Diagonal of the Smith normal form, `min(rows, cols)` entries, nonnegative
/// and in divisibility order (zeros last).
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let n = rows.min(cols);
    for t in 0..n {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero() && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                for j in t..cols {
                    let v = &a[(t, j)] * &q;
                    a[(i, j)] -= v;
                }
                if !a[(i, t)].is_zero() {
                    a.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                for i in t..rows {
                    let v = &a[(i, t)] * &q;
                    a[(i, j)] -= v;
                }
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
    }
    let mut diag: Vec<BigInt> = (0..n).map(|i| a[(i, i)].abs()).collect();
    // enforce divisibility: (x, y) -> (gcd, lcm), zeros stay last
    for i in 0..n {
        for j in i + 1..n {
            if diag[i].is_zero() {
                diag.swap(i, j);
            }
            if diag[i].is_zero() || diag[j].is_zero() {
                continue;
            }
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

pub fn abelianize(p: &GroupPresentation) -> AbelianDescriptor {
    let diag = smith_diagonal(&p.relation_matrix());
    AbelianDescriptor::from_invariant_factors(p.rank(), &diag)
}

/// Rank of the subgroup of `H₁(target)` spanned by the columns of `images`
/// (exponent vectors in the target generators).
pub fn abelian_image_rank(target: &GroupPresentation, images: &IntMatrix) -> usize {
    let rel = target.relation_matrix().transpose();
    let mut both = IntMatrix::zeros(target.rank(), rel.cols() + images.cols());
    for i in 0..target.rank() {
        for j in 0..rel.cols() {
            both[(i, j)] = rel[(i, j)].clone();
        }
        for j in 0..images.cols() {
            both[(i, rel.cols() + j)] = images[(i, j)].clone();
        }
    }
    both.rank() - rel.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::GroupWord;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse_letters(s).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn free_group() {
        assert_eq!(abelianize(&GroupPresentation::free(3)), AbelianDescriptor::free(3));
    }

    #[test]
    fn trefoil_is_z() {
        let p = GroupPresentation::from_equations(3, &[(w("ab"), w("ca")), (w("ca"), w("bc"))]).unwrap();
        let m = p.relation_matrix();
        assert_eq!(m, IntMatrix::from_rows(&[vec![0, 1, -1], vec![1, -1, 0]]).unwrap());
        assert_eq!(abelianize(&p), AbelianDescriptor::free(1));
    }

    #[test]
    fn cyclic_torsion() {
        let p = GroupPresentation::new(1, vec![w("aa")]).unwrap();
        let a = abelianize(&p);
        assert_eq!(a.free_rank, 0);
        assert_eq!(a.torsion, big(&[2]));
        assert_eq!(a.to_string(), "Z/2");
    }

    #[test]
    fn divisibility_order() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(smith_diagonal(&m), big(&[1, 6]));
        let m = IntMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(smith_diagonal(&m), big(&[2, 12, 0]));
        let m = IntMatrix::from_rows(&[vec![0, 0], vec![0, 5]]).unwrap();
        assert_eq!(smith_diagonal(&m), big(&[5, 0]));
    }

    #[test]
    fn cyclic_hom_counts() {
        let a = AbelianDescriptor { free_rank: 1, torsion: big(&[2, 4]) };
        assert_eq!(a.hom_count_to_cyclic(6), BigInt::from(6 * 2 * 2));
    }

    #[test]
    fn image_rank_modulo_relations() {
        let tgt = GroupPresentation::new(2, vec![w("aB")]).unwrap();
        let images = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(abelian_image_rank(&tgt, &images), 1);
    }
}
