//! Exact counts of homomorphisms into small finite groups by backtracking
//! over generator images.

use std::fmt;
use std::str::FromStr;

use super::presentation::GroupPresentation;
use crate::error::{Error, Result};

pub const MAX_RANK: usize = 6;
pub const MAX_ORDER: usize = 24;

/// Finite target groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiniteTarget {
    /// Symmetric group on 2, 3 or 4 points.
    Symmetric(u8),
    /// Cyclic group `ℤ/m`.
    Cyclic(u32),
}

impl FiniteTarget {
    pub const S2: FiniteTarget = FiniteTarget::Symmetric(2);
    pub const S3: FiniteTarget = FiniteTarget::Symmetric(3);
    pub const S4: FiniteTarget = FiniteTarget::Symmetric(4);

    pub fn order(self) -> usize {
        match self {
            FiniteTarget::Symmetric(n) => (1..=n as usize).product(),
            FiniteTarget::Cyclic(m) => m as usize,
        }
    }

    fn table(self) -> Result<CayleyTable> {
        match self {
            FiniteTarget::Symmetric(n) if (2..=4).contains(&n) => Ok(CayleyTable::symmetric(n as usize)),
            FiniteTarget::Cyclic(m) if m >= 1 => Ok(CayleyTable::cyclic(m as usize)),
            _ => Err(Error::invalid(format!("unsupported target group {self}"))),
        }
    }
}

impl fmt::Display for FiniteTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteTarget::Symmetric(n) => write!(f, "S{n}"),
            FiniteTarget::Cyclic(m) => write!(f, "Z/{m}"),
        }
    }
}

impl FromStr for FiniteTarget {
    type Err = Error;

    /// Accepts `s2`, `s3`, `s4` and `z/m`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(m) = lower.strip_prefix("z/") {
            let m: u32 = m.parse().map_err(|_| Error::Parse(format!("bad cyclic order in '{s}'")))?;
            return Ok(FiniteTarget::Cyclic(m));
        }
        match lower.as_str() {
            "s2" => Ok(FiniteTarget::S2),
            "s3" => Ok(FiniteTarget::S3),
            "s4" => Ok(FiniteTarget::S4),
            _ => Err(Error::Parse(format!("unknown target group '{s}'"))),
        }
    }
}

/// Multiplication table with element 0 the identity.
struct CayleyTable {
    order: usize,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

impl CayleyTable {
    fn cyclic(m: usize) -> Self {
        let mul = (0..m * m).map(|k| ((k / m + k % m) % m) as u8).collect();
        let inv = (0..m).map(|x| ((m - x) % m) as u8).collect();
        CayleyTable { order: m, mul, inv }
    }

    fn symmetric(n: usize) -> Self {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed under composition");
        let order = perms.len();
        let mut mul = vec![0u8; order * order];
        let mut inv = vec![0u8; order];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                // apply p then q
                let r: Vec<usize> = (0..n).map(|x| q[p[x]]).collect();
                mul[i * order + j] = index(&r) as u8;
            }
            let mut pi = vec![0; n];
            for (x, &y) in p.iter().enumerate() {
                pi[y] = x;
            }
            inv[i] = index(&pi) as u8;
        }
        CayleyTable { order, mul, inv }
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.order + b as usize]
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Number of homomorphisms `p → target`.
///
/// Relators are checked as soon as all of their generators have images.
pub fn count_homs(p: &GroupPresentation, target: FiniteTarget) -> Result<u128> {
    if p.rank() > MAX_RANK {
        return Err(Error::ResourceBound(format!("rank {} exceeds the limit {MAX_RANK}", p.rank())));
    }
    if target.order() > MAX_ORDER {
        return Err(Error::ResourceBound(format!(
            "target order {} exceeds the limit {MAX_ORDER}",
            target.order()
        )));
    }
    let table = target.table()?;
    let mut by_last: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); p.rank()];
    for r in p.relators() {
        let last = r.max_generator().expect("relators are nontrivial");
        by_last[last].push(r.syllables().iter().map(|s| (s.gen, s.exp < 0)).collect());
    }
    let mut assignment = vec![0u8; p.rank()];
    Ok(search(&table, &by_last, &mut assignment, 0))
}

fn search(table: &CayleyTable, by_last: &[Vec<Vec<(usize, bool)>>], asg: &mut [u8], k: usize) -> u128 {
    if k == asg.len() {
        return 1;
    }
    let mut total = 0;
    for x in 0..table.order as u8 {
        asg[k] = x;
        let ok = by_last[k].iter().all(|rel| {
            rel.iter().fold(0u8, |acc, &(g, inv)| {
                let e = if inv { table.inv[asg[g] as usize] } else { asg[g] };
                table.mul(acc, e)
            }) == 0
        });
        if ok {
            total += search(table, by_last, asg, k + 1);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::GroupWord;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse_letters(s).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(FiniteTarget::S3.order(), 6);
        assert_eq!(FiniteTarget::S4.order(), 24);
        assert_eq!(FiniteTarget::Cyclic(5).order(), 5);
        assert_eq!("z/7".parse::<FiniteTarget>().unwrap(), FiniteTarget::Cyclic(7));
        assert_eq!("S4".parse::<FiniteTarget>().unwrap(), FiniteTarget::S4);
        assert!("a5".parse::<FiniteTarget>().is_err());
    }

    #[test]
    fn free_groups() {
        assert_eq!(count_homs(&GroupPresentation::free(1), FiniteTarget::S3).unwrap(), 6);
        assert_eq!(count_homs(&GroupPresentation::free(2), FiniteTarget::S3).unwrap(), 36);
        assert_eq!(count_homs(&GroupPresentation::free(0), FiniteTarget::S4).unwrap(), 1);
    }

    #[test]
    fn symmetric_table_is_nonabelian() {
        let t = CayleyTable::symmetric(3);
        assert!((0..6u8).any(|a| (0..6u8).any(|b| t.mul(a, b) != t.mul(b, a))));
        assert!((0..6u8).all(|a| t.mul(a, t.inv[a as usize]) == 0));
    }

    #[test]
    fn trefoil_into_s3() {
        let p = GroupPresentation::from_equations(3, &[(w("ab"), w("ca")), (w("ca"), w("bc"))]).unwrap();
        assert_eq!(count_homs(&p, FiniteTarget::S3).unwrap(), 12);
    }

    #[test]
    fn bounds_enforced() {
        assert!(count_homs(&GroupPresentation::free(7), FiniteTarget::S2).is_err());
        assert!(count_homs(&GroupPresentation::free(1), FiniteTarget::Cyclic(25)).is_err());
    }
}
