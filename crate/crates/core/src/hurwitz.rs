//! The double Hurwitz series `Φ•_{ν,μ}(ħ)`, its composition and parity
//! identities, double Hurwitz numbers via the Burnside formula, and an
//! independent brute-force transposition-factorization count.

use rayon::prelude::*;

use crate::characters::CharTable;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::partition::Partition;
use crate::series::{ei, Monomial, MultiSeries, Truncation, Var};

/// `Φ•_{ν,μ}` truncated in `ħ`, with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct PhiSeries {
    nu: Partition,
    mu: Partition,
    series: MultiSeries,
}

impl PhiSeries {
    pub fn nu(&self) -> &Partition {
        &self.nu
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    pub fn series(&self) -> &MultiSeries {
        &self.series
    }

    /// Coefficient of `ħ^r`.
    pub fn coefficient(&self, r: u32) -> Rational {
        let c = self
            .series
            .coefficient(&Monomial::new(&[(Var::Hbar, ei(r as i64))]));
        c.as_rational().cloned().unwrap_or_else(|| {
            unreachable!("Φ coefficients are rational")
        })
    }
}

/// `Φ•_{ν,μ}` evaluated at a series argument:
/// `Σ_η (χ_η(ν)/z_ν)(χ_η(μ)/z_μ) exp(κ_η · arg / 2)`.
///
/// `arg` must have strictly positive graded degree so the exponentials
/// truncate; `arg = ħ` gives the series itself, `arg = √-1 τ ħ` the shifted
/// variant used by the vertex, and `arg = ħ₁ + ħ₂` the two-point form of the
/// composition identity.
pub fn phi_at(nu: &Partition, mu: &Partition, arg: &MultiSeries) -> Result<MultiSeries> {
    if nu.size() != mu.size() {
        return Err(Error::domain(format!(
            "Φ needs |ν| = |μ|, got {nu} and {mu}"
        )));
    }
    let d = nu.size() as u32;
    let trunc = arg.trunc().clone();
    if d == 0 {
        return Ok(MultiSeries::one(&trunc));
    }
    let table = CharTable::for_size(d);
    let zz = Rational::new(
        1.into(),
        (nu.z_factor() as i64 * mu.z_factor() as i64).into(),
    );
    let mut out = MultiSeries::zero(&trunc);
    for eta in table.partitions() {
        let weight = table.value(eta, nu) * table.value(eta, mu);
        if weight == 0 {
            continue;
        }
        let half_kappa = Rational::new(eta.kappa().into(), 2.into());
        let e = arg.scale_rat(&half_kappa).exp()?;
        out = out.add(&e.scale_rat(&(&zz * Rational::from_integer(weight.into()))))?;
    }
    Ok(out)
}

/// `Φ•_{ν,μ}(ħ)` truncated at the given `ħ` order.
pub fn phi(nu: &Partition, mu: &Partition, order: u32) -> Result<PhiSeries> {
    let trunc = Truncation::single(&[Var::Hbar], ei(order as i64));
    let series = phi_at(nu, mu, &MultiSeries::var(&trunc, Var::Hbar))?;
    Ok(PhiSeries {
        nu: nu.clone(),
        mu: mu.clone(),
        series,
    })
}

/// Verify the composition identity
/// `Φ•_{ν,μ}(ħ₁+ħ₂) = Σ_σ Φ•_{ν,σ}(ħ₁) z_σ Φ•_{σ,μ}(ħ₂)`
/// exactly through total order `order` in `(ħ₁, ħ₂)`.
pub fn phi_compose_check(nu: &Partition, mu: &Partition, order: u32) -> Result<bool> {
    if nu.size() != mu.size() {
        return Err(Error::domain("composition check needs |ν| = |μ|"));
    }
    let trunc = Truncation::single(&[Var::Hbar, Var::Hbar2], ei(order as i64));
    let h1 = MultiSeries::var(&trunc, Var::Hbar);
    let h2 = MultiSeries::var(&trunc, Var::Hbar2);
    let lhs = phi_at(nu, mu, &h1.add(&h2)?)?;
    let mut rhs = MultiSeries::zero(&trunc);
    for sigma in Partition::enumerate(nu.size() as u32) {
        let a = phi_at(nu, &sigma, &h1)?;
        let b = phi_at(&sigma, mu, &h2)?;
        let z = Rational::from_integer((sigma.z_factor() as i64).into());
        rhs = rhs.add(&a.mul(&b)?.scale_rat(&z))?;
    }
    Ok(lhs == rhs)
}

/// Double Hurwitz number `H•_{χ,ν,μ} = r! [ħ^r] Φ•_{ν,μ}` with
/// `r = -χ + l(ν) + l(μ)`.
pub fn hurwitz_number(chi: i64, nu: &Partition, mu: &Partition) -> Result<Rational> {
    let r = -chi + nu.len() as i64 + mu.len() as i64;
    if r < 0 {
        return Err(Error::domain(format!(
            "negative branch point count r = {r}"
        )));
    }
    let series = phi(nu, mu, r as u32)?;
    let mut fact = Rational::from_integer(1.into());
    for k in 1..=r {
        fact *= Rational::from_integer(k.into());
    }
    Ok(series.coefficient(r as u32) * fact)
}

// ---------------------------------------------------------------------------
// brute-force oracle
// ---------------------------------------------------------------------------

type Perm = Vec<u8>;

fn cycle_type(p: &Perm) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts).expect("positive cycle lengths")
}

fn cycle_count(p: &Perm) -> usize {
    let mut seen = vec![false; p.len()];
    let mut n = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        n += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
        }
    }
    n
}

fn all_permutations(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (0..d as u8).collect();
    fn heap(k: usize, cur: &mut Perm, out: &mut Vec<Perm>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(d, &mut cur, &mut out);
    out
}

/// Count tuples `(τ_r, ..., τ_1)` of transpositions with
/// `τ_r ⋯ τ_1 α ∈ C_μ`, pruning by the minimum number of transpositions
/// still needed to reach the cycle count of `μ`.
fn count_factorizations(alpha: &Perm, mu: &Partition, r: u32, swaps: &[(usize, usize)]) -> u64 {
    fn go(cur: &Perm, mu: &Partition, remaining: u32, swaps: &[(usize, usize)]) -> u64 {
        let cycles = cycle_count(cur) as i64;
        let dist = (cycles - mu.len() as i64).abs();
        if dist > remaining as i64 || (remaining as i64 - dist) % 2 != 0 {
            return 0;
        }
        if remaining == 0 {
            return u64::from(&cycle_type(cur) == mu);
        }
        let mut total = 0;
        for &(i, j) in swaps {
            // next = (i j) ∘ cur
            let mut next = cur.clone();
            for v in next.iter_mut() {
                if *v as usize == i {
                    *v = j as u8;
                } else if *v as usize == j {
                    *v = i as u8;
                }
            }
            total += go(&next, mu, remaining - 1, swaps);
        }
        total
    }
    go(alpha, mu, r, swaps)
}

/// Automorphism-weighted count of transposition factorizations:
/// `(1/d!) #{(α, τ_1..τ_r) : α ∈ C_ν, τ_r⋯τ_1 α ∈ C_μ}`.
///
/// Budget: `d ≤ 6`, `r ≤ 4`.
pub fn brute_force_hurwitz(r: u32, nu: &Partition, mu: &Partition) -> Result<Rational> {
    let d = nu.size();
    if mu.size() != d {
        return Err(Error::domain("brute force needs |ν| = |μ|"));
    }
    if d > 6 || r > 4 {
        return Err(Error::Budget(format!(
            "brute-force enumeration capped at d <= 6, r <= 4 (got d = {d}, r = {r})"
        )));
    }
    let d = d as usize;
    let swaps: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let class: Vec<Perm> = all_permutations(d)
        .into_iter()
        .filter(|p| &cycle_type(p) == nu)
        .collect();
    let count: u64 = class
        .par_iter()
        .map(|alpha| count_factorizations(alpha, mu, r, &swaps))
        .sum();
    let mut fact: i64 = 1;
    for k in 1..=d as i64 {
        fact *= k;
    }
    Ok(Rational::new((count as i64).into(), fact.into()))
}

/// `Φ•` values and the Burnside formula as a JSON table for the CLI.
pub fn hurwitz_table(nu: &Partition, mu: &Partition, r_max: u32) -> Result<serde_json::Value> {
    let mut rows = Vec::new();
    for r in 0..=r_max {
        let chi = nu.len() as i64 + mu.len() as i64 - r as i64;
        let h = hurwitz_number(chi, nu, mu)?;
        rows.push(serde_json::json!({
            "chi": chi,
            "r": r,
            "h": h.to_string(),
        }));
    }
    Ok(serde_json::json!({
        "nu": nu.to_string(),
        "mu": mu.to_string(),
        "rows": rows,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use num::Zero;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn phi_single_box_is_constant_one() {
        let f = phi(&p(&[1]), &p(&[1]), 6).unwrap();
        let trunc = Truncation::single(&[Var::Hbar], ei(6));
        assert_eq!(*f.series(), MultiSeries::one(&trunc));
    }

    #[test]
    fn phi_two_cycle() {
        // Φ_{(2),(2)} = (e^ħ + e^{-ħ})/4
        let f = phi(&p(&[2]), &p(&[2]), 6).unwrap();
        assert_eq!(f.coefficient(0), rat(1, 2));
        assert_eq!(f.coefficient(1), rat_int(0));
        assert_eq!(f.coefficient(2), rat(1, 4));
        assert_eq!(f.coefficient(4), rat(1, 48));
        assert_eq!(f.coefficient(6), rat(1, 1440));
    }

    #[test]
    fn phi_initial_value_is_delta_over_z() {
        for d in 1..=5u32 {
            for nu in Partition::enumerate(d) {
                for mu in Partition::enumerate(d) {
                    let f = phi(&nu, &mu, 0).unwrap();
                    let want = if nu == mu {
                        rat(1, nu.z_factor() as i64)
                    } else {
                        rat_int(0)
                    };
                    assert_eq!(f.coefficient(0), want, "ν={nu} μ={mu}");
                }
            }
        }
    }

    #[test]
    fn phi_size_mismatch_rejected() {
        assert!(phi(&p(&[2]), &p(&[1]), 4).is_err());
    }

    #[test]
    fn phi_parity() {
        // Φ(-ħ) = (-1)^{l(μ)+l(ν)} Φ(ħ)
        let trunc = Truncation::single(&[Var::Hbar], ei(6));
        let h = MultiSeries::var(&trunc, Var::Hbar);
        for d in 1..=6u32 {
            for nu in Partition::enumerate(d) {
                for mu in Partition::enumerate(d) {
                    let plus = phi_at(&nu, &mu, &h).unwrap();
                    let minus = phi_at(&nu, &mu, &h.neg()).unwrap();
                    let sign = (nu.len() + mu.len()) % 2;
                    let want = if sign == 0 { plus.clone() } else { plus.neg() };
                    assert_eq!(minus, want, "ν={nu} μ={mu}");
                }
            }
        }
    }

    #[test]
    fn phi_symmetry() {
        for d in 1..=5u32 {
            for nu in Partition::enumerate(d) {
                for mu in Partition::enumerate(d) {
                    let a = phi(&nu, &mu, 6).unwrap();
                    let b = phi(&mu, &nu, 6).unwrap();
                    assert_eq!(a.series(), b.series());
                }
            }
        }
    }

    #[test]
    fn composition_identity_small() {
        assert!(phi_compose_check(&p(&[1]), &p(&[1]), 4).unwrap());
        for nu in Partition::enumerate(2) {
            for mu in Partition::enumerate(2) {
                assert!(phi_compose_check(&nu, &mu, 4).unwrap());
            }
        }
        for nu in Partition::enumerate(3) {
            for mu in Partition::enumerate(3) {
                assert!(phi_compose_check(&nu, &mu, 4).unwrap());
            }
        }
    }

    #[test]
    fn hurwitz_worked_values() {
        // d=2: H = 1/2 at r=2 over ν=μ=(2)
        assert_eq!(hurwitz_number(0, &p(&[2]), &p(&[2])).unwrap(), rat(1, 2));
        // Φ_{(1),(1)} constant: all r >= 1 vanish
        for r in 1..=4i64 {
            let chi = 2 - r;
            assert!(hurwitz_number(chi, &p(&[1]), &p(&[1]))
                .unwrap()
                .is_zero());
        }
        // single transposition joining two fixed points
        assert_eq!(
            hurwitz_number(2, &p(&[2]), &p(&[1, 1])).unwrap(),
            rat(1, 2)
        );
        assert!(hurwitz_number(100, &p(&[2]), &p(&[2])).is_err());
    }

    #[test]
    fn brute_force_base_cases() {
        assert_eq!(
            brute_force_hurwitz(2, &p(&[2]), &p(&[2])).unwrap(),
            rat(1, 2)
        );
        assert_eq!(
            brute_force_hurwitz(1, &p(&[2]), &p(&[1, 1])).unwrap(),
            rat(1, 2)
        );
        // r = 0 is the identity factorization: 1/z_ν on the diagonal
        for d in 1..=4u32 {
            for nu in Partition::enumerate(d) {
                for mu in Partition::enumerate(d) {
                    let got = brute_force_hurwitz(0, &nu, &mu).unwrap();
                    let want = if nu == mu {
                        rat(1, nu.z_factor() as i64)
                    } else {
                        rat_int(0)
                    };
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn brute_force_budget() {
        assert!(brute_force_hurwitz(5, &p(&[2]), &p(&[2])).is_err());
        assert!(brute_force_hurwitz(1, &p(&[7]), &p(&[7])).is_err());
    }

    #[test]
    fn burnside_matches_brute_force_small() {
        for d in 1..=4u32 {
            for nu in Partition::enumerate(d) {
                for mu in Partition::enumerate(d) {
                    for r in 0..=3u32 {
                        let chi = nu.len() as i64 + mu.len() as i64 - r as i64;
                        let burnside = hurwitz_number(chi, &nu, &mu).unwrap();
                        let brute = brute_force_hurwitz(r, &nu, &mu).unwrap();
                        assert_eq!(burnside, brute, "d={d} ν={nu} μ={mu} r={r}");
                    }
                }
            }
        }
    }
}
