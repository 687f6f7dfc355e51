//! Exact irreducible characters of symmetric groups.
//!
//! Characters are computed by the Murnaghan–Nakayama border-strip recursion,
//! run over beta-sets (first-column hook lengths). The full table for a given
//! `d` is built once behind a synchronized cache and shared; reads after
//! construction are lock-free through the returned `Arc`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::partition::Partition;

/// Character table of `S_d`: integer values `χ_λ(μ)` for all `λ, μ ⊢ d` in
/// the deterministic reverse-lexicographic partition order.
#[derive(Debug)]
pub struct CharTable {
    d: u32,
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharTable {
    /// The memoized table for `S_d`.
    pub fn for_size(d: u32) -> Arc<CharTable> {
        static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CharTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(t) = cache.read().unwrap().get(&d) {
            return Arc::clone(t);
        }
        let mut w = cache.write().unwrap();
        // re-check under the write lock: another thread may have built it
        if let Some(t) = w.get(&d) {
            return Arc::clone(t);
        }
        let t = Arc::new(CharTable::build(d));
        w.insert(d, Arc::clone(&t));
        t
    }

    fn build(d: u32) -> CharTable {
        let parts = Partition::enumerate(d);
        let index: HashMap<Partition, usize> = parts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut memo: HashMap<(Vec<u32>, Vec<u32>), i64> = HashMap::new();
        let values = parts
            .iter()
            .map(|lam| {
                parts
                    .iter()
                    .map(|mu| mn_character(lam.parts(), mu.parts(), &mut memo))
                    .collect()
            })
            .collect();
        CharTable {
            d,
            parts,
            index,
            values,
        }
    }

    pub fn size(&self) -> u32 {
        self.d
    }

    /// Partitions of `d` in table order.
    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn value(&self, lam: &Partition, mu: &Partition) -> i64 {
        self.values[self.index[lam]][self.index[mu]]
    }

    pub fn row(&self, lam: &Partition) -> &[i64] {
        &self.values[self.index[lam]]
    }
}

/// `χ_λ(μ)` for `|λ| = |μ|` (the empty case gives 1).
pub fn chi(lam: &Partition, mu: &Partition) -> Result<i64> {
    if lam.size() != mu.size() {
        return Err(Error::domain(format!(
            "character needs |λ| = |μ|, got {lam} and {mu}"
        )));
    }
    Ok(CharTable::for_size(lam.size() as u32).value(lam, mu))
}

/// Murnaghan–Nakayama over beta-sets. Parts of `mu` are consumed longest
/// first, which keeps the memo table of sub-shapes dense.
fn mn_character(
    lam: &[u32],
    mu: &[u32],
    memo: &mut HashMap<(Vec<u32>, Vec<u32>), i64>,
) -> i64 {
    if mu.is_empty() {
        return if lam.is_empty() { 1 } else { 0 };
    }
    let key = (lam.to_vec(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let strip = mu[0] as i64;
    let rest = &mu[1..];
    // beta-set: distinct values lam_k + (n - k), 1-based k
    let n = lam.len();
    let beta: Vec<i64> = (0..n)
        .map(|k| lam[k] as i64 + (n - k - 1) as i64)
        .collect();
    let mut total = 0i64;
    for (pos, &b) in beta.iter().enumerate() {
        let target = b - strip;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        // height = number of beta entries strictly between target and b
        let height = beta
            .iter()
            .filter(|&&x| target < x && x < b)
            .count() as i64;
        let mut nb = beta.clone();
        nb[pos] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let new_lam: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(k, &x)| (x - (n - k - 1) as i64) as u32)
            .filter(|&x| x > 0)
            .collect();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn_character(&new_lam, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Eigenvalue `κ_η / 2` of the transposition class sum acting on the
/// irreducible indexed by `η`; equals `C(d,2) χ_η(2,1^{d-2}) / χ_η(1^d)`.
pub fn central_transposition(eta: &Partition) -> Rational {
    Rational::new(eta.kappa().into(), 2.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use num::Zero;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn trivial_representation_is_all_ones() {
        for d in 1..=7u32 {
            let lam = p(&[d]);
            for mu in Partition::enumerate(d) {
                assert_eq!(chi(&lam, &mu).unwrap(), 1);
            }
        }
    }

    #[test]
    fn sign_of_s2() {
        assert_eq!(chi(&p(&[1, 1]), &p(&[2])).unwrap(), -1);
    }

    #[test]
    fn standard_of_s3_dimension() {
        assert_eq!(chi(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
    }

    #[test]
    fn dimensions_match_hook_formula() {
        for d in 0..=8u32 {
            let one_d = Partition::new(vec![1; d as usize]).unwrap();
            for lam in Partition::enumerate(d) {
                assert_eq!(
                    chi(&lam, &one_d).unwrap(),
                    lam.hook_dimension() as i64,
                    "λ = {lam}"
                );
            }
        }
    }

    #[test]
    fn size_mismatch_rejected() {
        assert!(chi(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn empty_convention() {
        assert_eq!(chi(&Partition::empty(), &Partition::empty()).unwrap(), 1);
    }

    #[test]
    fn row_orthogonality() {
        for d in 1..=8u32 {
            let table = CharTable::for_size(d);
            let parts = table.partitions();
            for lam in parts {
                for rho in parts {
                    let mut s = Rational::zero();
                    for mu in parts {
                        let v = table.value(lam, mu) * table.value(rho, mu);
                        s += Rational::new(v.into(), (mu.z_factor() as i64).into());
                    }
                    let want = rat_int(i64::from(lam == rho));
                    assert_eq!(s, want, "d={d} λ={lam} ρ={rho}");
                }
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for d in 1..=8u32 {
            let table = CharTable::for_size(d);
            let parts = table.partitions();
            for mu in parts {
                for nu in parts {
                    let s: i64 = parts
                        .iter()
                        .map(|lam| table.value(lam, mu) * table.value(lam, nu))
                        .sum();
                    let want = if mu == nu { mu.z_factor() as i64 } else { 0 };
                    assert_eq!(s, want, "d={d} μ={mu} ν={nu}");
                }
            }
        }
    }

    #[test]
    fn sum_of_squared_dimensions() {
        for d in 1..=8u32 {
            let one_d = Partition::new(vec![1; d as usize]).unwrap();
            let total: i64 = Partition::enumerate(d)
                .iter()
                .map(|lam| {
                    let v = chi(lam, &one_d).unwrap();
                    v * v
                })
                .sum();
            let fact: i64 = (1..=d as i64).product();
            assert_eq!(total, fact);
        }
    }

    #[test]
    fn conjugation_sign_rule() {
        for d in 1..=8u32 {
            let table = CharTable::for_size(d);
            for lam in table.partitions() {
                for mu in table.partitions() {
                    let sign = if (mu.size() as i64 - mu.len() as i64) % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(
                        table.value(&lam.conjugate(), mu),
                        sign * table.value(lam, mu)
                    );
                }
            }
        }
    }

    #[test]
    fn central_transposition_values() {
        assert_eq!(central_transposition(&p(&[2])), rat_int(1));
        assert_eq!(central_transposition(&p(&[1, 1])), rat_int(-1));
        assert_eq!(central_transposition(&p(&[3, 1])), rat_int(2));
    }

    #[test]
    fn central_transposition_cross_check() {
        // κ_η/2 = C(d,2) χ_η(2,1^{d-2}) / χ_η(1^d)
        for d in 2..=7u32 {
            let mut cycle = vec![1u32; d as usize - 2];
            cycle.insert(0, 2);
            let two_class = Partition::new(cycle).unwrap();
            let one_d = Partition::new(vec![1; d as usize]).unwrap();
            let binom = (d as i64) * (d as i64 - 1) / 2;
            for eta in Partition::enumerate(d) {
                let lhs = central_transposition(&eta);
                let rhs = Rational::new(
                    (binom * chi(&eta, &two_class).unwrap()).into(),
                    chi(&eta, &one_d).unwrap().into(),
                );
                assert_eq!(lhs, rhs, "η = {eta}");
            }
        }
    }
}
