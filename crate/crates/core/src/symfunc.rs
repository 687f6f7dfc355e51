//! Schur and skew-Schur functions evaluated at structured infinite
//! specialization alphabets.
//!
//! Alphabets are symbolic: geometric rays with a monomial prefactor (and,
//! for exponential coordinates, a series ratio `e^{c·v}`), partition-shifted
//! rays `{t^{i-1/2} q^{-ν_i}}`, finite monomial lists, and unions. Power sums
//! have exact closed forms, so evaluations carry exact tails and truncate
//! only at the series level. Straight Schur functions go through the
//! character expansion `s_λ = Σ_ρ χ_λ(ρ)/z_ρ · p_ρ` (reusing the memoized
//! character tables); skew shapes go through the Jacobi–Trudi determinant
//! with complete homogeneous functions from Newton's identities.

use std::collections::HashMap;

use crate::characters::CharTable;
use crate::error::{Error, Result};
use crate::exact::{CycloNumber, Rational};
use crate::partition::Partition;
use crate::series::{ei, ex, Expo, Monomial, MultiSeries, Truncation, Var};

/// A single alphabet element or ray prefactor: `coef · monomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMonomial {
    pub coef: CycloNumber,
    pub mono: Monomial,
}

impl ScaledMonomial {
    pub fn one() -> Self {
        ScaledMonomial {
            coef: CycloNumber::one(),
            mono: Monomial::one(),
        }
    }

    pub fn var_pow(v: Var, e: Expo) -> Self {
        ScaledMonomial {
            coef: CycloNumber::one(),
            mono: Monomial::new(&[(v, e)]),
        }
    }

    pub fn new(coef: CycloNumber, pairs: &[(Var, Expo)]) -> Self {
        ScaledMonomial {
            coef,
            mono: Monomial::new(pairs),
        }
    }

    pub fn mul(&self, other: &ScaledMonomial) -> ScaledMonomial {
        ScaledMonomial {
            coef: self.coef.mul(&other.coef),
            mono: self.mono.mul(&other.mono),
        }
    }

    /// Integer power (the coefficient is a unit in a field).
    pub fn powi(&self, k: i64) -> ScaledMonomial {
        ScaledMonomial {
            coef: self.coef.powi(k).expect("nonzero coefficient"),
            mono: self.mono.pow(ei(k)),
        }
    }

    pub fn to_series(&self, trunc: &Truncation) -> MultiSeries {
        MultiSeries::monomial(trunc, self.mono.clone(), self.coef.clone())
    }
}

/// Ratio of a geometric ray.
#[derive(Clone, Debug)]
pub enum RayRatio {
    /// Successive elements differ by a fixed monomial.
    Monomial(ScaledMonomial),
    /// Successive elements differ by `exp(coef · var)`; used for
    /// exponential coordinates where the ratio has unit constant term.
    ExpLinear { coef: CycloNumber, var: Var },
}

impl RayRatio {
    fn pow_series(&self, k: u32, trunc: &Truncation) -> MultiSeries {
        match self {
            RayRatio::Monomial(m) => m.powi(k as i64).to_series(trunc),
            RayRatio::ExpLinear { coef, var } => {
                let arg = MultiSeries::monomial(
                    trunc,
                    Monomial::var(*var),
                    coef.scale(&Rational::from_integer((k as i64).into())),
                );
                arg.exp().expect("linear exponent")
            }
        }
    }
}

/// Symbolic description of an infinite (or finite) specialization point set.
#[derive(Clone, Debug)]
pub enum Alphabet {
    /// `prefactor · (1, r, r², r³, ...)` for a ratio `r`.
    Ray {
        prefactor: ScaledMonomial,
        ratio: RayRatio,
    },
    /// `prefactor · {step^{i-1/2} twist^{-shape_i}}_{i≥1}` with
    /// `shape_i = 0` beyond the length of `shape`.
    Shifted {
        prefactor: ScaledMonomial,
        shape: Partition,
        step: Var,
        twist: Var,
    },
    /// A finite list of monomials.
    Monomials(Vec<ScaledMonomial>),
    /// Disjoint union.
    Union(Vec<Alphabet>),
}

impl Alphabet {
    /// `(1, v, v², ...)`.
    pub fn principal(v: Var) -> Alphabet {
        Alphabet::Ray {
            prefactor: ScaledMonomial::one(),
            ratio: RayRatio::Monomial(ScaledMonomial::var_pow(v, ei(1))),
        }
    }

    /// `v^{-ρ} = (v^{1/2}, v^{3/2}, ...)`.
    pub fn rho(v: Var) -> Alphabet {
        Alphabet::Ray {
            prefactor: ScaledMonomial::var_pow(v, ex(1, 2)),
            ratio: RayRatio::Monomial(ScaledMonomial::var_pow(v, ei(1))),
        }
    }

    /// The union of `a` principal rays in `step`, the k-th scaled by
    /// `orb(k)·orb(k+1)⋯orb(a-1)` (empty product for `k = a`).
    pub fn orbifold_rays(a: u32, step: Var, orb: impl Fn(u8) -> Var) -> Alphabet {
        let mut rays = Vec::with_capacity(a as usize);
        for k in 1..=a {
            let mut pref = ScaledMonomial::one();
            for j in k..a {
                pref = pref.mul(&ScaledMonomial::var_pow(orb(j as u8), ei(1)));
            }
            rays.push(Alphabet::Ray {
                prefactor: pref,
                ratio: RayRatio::Monomial(ScaledMonomial::var_pow(step, ei(1))),
            });
        }
        Alphabet::Union(rays)
    }

    /// `{step^{i-1/2} twist^{-shape_i}}_{i≥1}`.
    pub fn shifted_rho(shape: &Partition, step: Var, twist: Var) -> Alphabet {
        Alphabet::Shifted {
            prefactor: ScaledMonomial::one(),
            shape: shape.clone(),
            step,
            twist,
        }
    }

    /// Scale every element by a fixed monomial.
    pub fn scaled(&self, m: &ScaledMonomial) -> Alphabet {
        match self {
            Alphabet::Ray { prefactor, ratio } => Alphabet::Ray {
                prefactor: prefactor.mul(m),
                ratio: ratio.clone(),
            },
            Alphabet::Shifted {
                prefactor,
                shape,
                step,
                twist,
            } => Alphabet::Shifted {
                prefactor: prefactor.mul(m),
                shape: shape.clone(),
                step: *step,
                twist: *twist,
            },
            Alphabet::Monomials(list) => {
                Alphabet::Monomials(list.iter().map(|x| x.mul(m)).collect())
            }
            Alphabet::Union(parts) => {
                Alphabet::Union(parts.iter().map(|a| a.scaled(m)).collect())
            }
        }
    }
}

/// `p_k` of the alphabet, with the exact closed form for ray tails:
/// `p_k(c·(1,r,r²,…)) = c^k / (1 - r^k)`.
pub fn power_sum(alphabet: &Alphabet, k: u32, trunc: &Truncation) -> Result<MultiSeries> {
    assert!(k >= 1, "power sums are indexed from 1");
    match alphabet {
        Alphabet::Ray { prefactor, ratio } => {
            let rk = ratio.pow_series(k, trunc);
            let tail = MultiSeries::one(trunc).sub(&rk)?.geom_inverse()?;
            Ok(tail.mul_monomial(
                &prefactor.mono.pow(ei(k as i64)),
                &prefactor.coef.powi(k as i64)?,
            ))
        }
        Alphabet::Shifted {
            prefactor,
            shape,
            step,
            twist,
        } => {
            let l = shape.len() as i64;
            let mut head = MultiSeries::zero(trunc);
            for (i, &part) in shape.parts().iter().enumerate() {
                let m = Monomial::new(&[
                    (*step, ex((2 * i as i64 + 1) * k as i64, 2)),
                    (*twist, ei(-(part as i64) * k as i64)),
                ]);
                head = head.add(&MultiSeries::monomial(trunc, m, CycloNumber::one()))?;
            }
            let step_k = MultiSeries::var_pow(trunc, *step, ei(k as i64));
            let tail = MultiSeries::one(trunc)
                .sub(&step_k)?
                .geom_inverse()?
                .mul_monomial(
                    &Monomial::new(&[(*step, ex((2 * l + 1) * k as i64, 2))]),
                    &CycloNumber::one(),
                );
            Ok(head.add(&tail)?.mul_monomial(
                &prefactor.mono.pow(ei(k as i64)),
                &prefactor.coef.powi(k as i64)?,
            ))
        }
        Alphabet::Monomials(list) => {
            let mut s = MultiSeries::zero(trunc);
            for m in list {
                s = s.add(&m.powi(k as i64).to_series(trunc))?;
            }
            Ok(s)
        }
        Alphabet::Union(parts) => {
            let mut s = MultiSeries::zero(trunc);
            for a in parts {
                s = s.add(&power_sum(a, k, trunc)?)?;
            }
            Ok(s)
        }
    }
}

/// Memoizing evaluator for one alphabet at one truncation.
pub struct AlphabetEval<'a> {
    alphabet: &'a Alphabet,
    trunc: Truncation,
    power_sums: HashMap<u32, MultiSeries>,
    homogeneous: Vec<MultiSeries>,
}

impl<'a> AlphabetEval<'a> {
    pub fn new(alphabet: &'a Alphabet, trunc: &Truncation) -> Self {
        AlphabetEval {
            alphabet,
            trunc: trunc.clone(),
            power_sums: HashMap::new(),
            homogeneous: Vec::new(),
        }
    }

    pub fn power_sum(&mut self, k: u32) -> Result<MultiSeries> {
        if let Some(p) = self.power_sums.get(&k) {
            return Ok(p.clone());
        }
        let p = power_sum(self.alphabet, k, &self.trunc)?;
        self.power_sums.insert(k, p.clone());
        Ok(p)
    }

    /// `p_ρ = ∏_i p_{ρ_i}`.
    pub fn power_sum_product(&mut self, rho: &Partition) -> Result<MultiSeries> {
        let mut out = MultiSeries::one(&self.trunc);
        for &part in rho.parts() {
            out = out.mul(&self.power_sum(part)?)?;
        }
        Ok(out)
    }

    /// Complete homogeneous `h_k` from Newton's identities
    /// `k·h_k = Σ_{i=1}^k p_i h_{k-i}`.
    pub fn homogeneous(&mut self, k: u32) -> Result<MultiSeries> {
        if self.homogeneous.is_empty() {
            self.homogeneous.push(MultiSeries::one(&self.trunc));
        }
        while self.homogeneous.len() <= k as usize {
            let n = self.homogeneous.len() as u32;
            let mut s = MultiSeries::zero(&self.trunc);
            for i in 1..=n {
                let p = self.power_sum(i)?;
                let h = self.homogeneous[(n - i) as usize].clone();
                s = s.add(&p.mul(&h)?)?;
            }
            self.homogeneous
                .push(s.scale_rat(&Rational::new(1.into(), (n as i64).into())));
        }
        Ok(self.homogeneous[k as usize].clone())
    }

    /// Straight Schur function through the character expansion.
    pub fn schur(&mut self, lam: &Partition) -> Result<MultiSeries> {
        if lam.is_empty() {
            return Ok(MultiSeries::one(&self.trunc));
        }
        let d = lam.size() as u32;
        let table = CharTable::for_size(d);
        let mut out = MultiSeries::zero(&self.trunc);
        for rho in table.partitions() {
            let coef = Rational::new(
                table.value(lam, rho).into(),
                (rho.z_factor() as i64).into(),
            );
            out = out.add(&self.power_sum_product(rho)?.scale_rat(&coef))?;
        }
        Ok(out)
    }

    /// Skew Schur function `s_{λ/η}` by the Jacobi–Trudi determinant
    /// `det(h_{λ_i - η_j - i + j})`. Non-contained `η` comes out zero from
    /// the vanishing determinant.
    pub fn skew_schur(&mut self, lam: &Partition, eta: &Partition) -> Result<MultiSeries> {
        let n = lam.len().max(eta.len());
        if n == 0 {
            return Ok(MultiSeries::one(&self.trunc));
        }
        // indices may reach λ_1 + n - 1
        let max_index = lam.part(0) as i64 + n as i64;
        for k in 0..=max_index.max(0) {
            self.homogeneous(k as u32)?;
        }
        let entry = |i: usize, j: usize| -> Option<usize> {
            let idx = lam.part(i) as i64 - eta.part(j) as i64 - i as i64 + j as i64;
            if idx < 0 {
                None
            } else {
                Some(idx as usize)
            }
        };
        // cofactor expansion over rows with memoized column subsets
        let mut memo: HashMap<u64, MultiSeries> = HashMap::new();
        self.det_minor(n, 0, (1u64 << n) - 1, &entry, &mut memo)
    }

    fn det_minor(
        &mut self,
        n: usize,
        row: usize,
        cols: u64,
        entry: &dyn Fn(usize, usize) -> Option<usize>,
        memo: &mut HashMap<u64, MultiSeries>,
    ) -> Result<MultiSeries> {
        if row == n {
            return Ok(MultiSeries::one(&self.trunc));
        }
        if let Some(d) = memo.get(&cols) {
            return Ok(d.clone());
        }
        let mut det = MultiSeries::zero(&self.trunc);
        let mut sign_pos = true;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            if let Some(idx) = entry(row, j) {
                let h = self.homogeneous[idx].clone();
                if !h.is_zero() {
                    let minor = self.det_minor(n, row + 1, cols & !(1 << j), entry, memo)?;
                    let contrib = h.mul(&minor)?;
                    det = if sign_pos {
                        det.add(&contrib)?
                    } else {
                        det.sub(&contrib)?
                    };
                }
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, det.clone());
        Ok(det)
    }
}

/// One-shot Schur evaluation.
pub fn schur(lam: &Partition, alphabet: &Alphabet, trunc: &Truncation) -> Result<MultiSeries> {
    AlphabetEval::new(alphabet, trunc).schur(lam)
}

/// One-shot skew Schur evaluation.
pub fn skew_schur(
    lam: &Partition,
    eta: &Partition,
    alphabet: &Alphabet,
    trunc: &Truncation,
) -> Result<MultiSeries> {
    AlphabetEval::new(alphabet, trunc).skew_schur(lam, eta)
}

/// Principal specialization by the hook-content formula:
/// `s_λ(1, v, v², ...) = v^{n(λ)} / ∏_{c∈λ} (1 - v^{h(c)})`.
pub fn hook_principal(lam: &Partition, v: Var, trunc: &Truncation) -> Result<MultiSeries> {
    let mut out = MultiSeries::monomial(
        trunc,
        Monomial::new(&[(v, ei(lam.n_stat() as i64))]),
        CycloNumber::one(),
    );
    for h in lam.hooks() {
        let f = MultiSeries::one(trunc)
            .sub(&MultiSeries::var_pow(trunc, v, ei(h as i64)))?
            .geom_inverse()?;
        out = out.mul(&f)?;
    }
    Ok(out)
}

/// `∏_{i,j} (1 - Q a_i b_j) = exp(-Σ_{d≥1} Q^d p_d(A) p_d(B) / d)`,
/// expanded through `Q^{q_order}`. The truncation must grade [`Var::Deg`].
pub fn cauchy_product(
    a: &Alphabet,
    b: &Alphabet,
    q_order: u32,
    trunc: &Truncation,
) -> Result<MultiSeries> {
    if !trunc.is_graded(Var::Deg) {
        return Err(Error::domain("cauchy_product needs Q graded"));
    }
    let mut arg = MultiSeries::zero(trunc);
    for d in 1..=q_order {
        let pa = power_sum(a, d, trunc)?;
        let pb = power_sum(b, d, trunc)?;
        let qd = MultiSeries::var_pow(trunc, Var::Deg, ei(d as i64));
        let term = pa
            .mul(&pb)?
            .mul(&qd)?
            .scale_rat(&Rational::new((-1).into(), (d as i64).into()));
        arg = arg.add(&term)?;
    }
    arg.exp()
}
