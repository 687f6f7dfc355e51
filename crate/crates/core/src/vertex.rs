//! One-leg refined vertices: the effective orbifold vertex in `(t, q_k)`
//! coordinates, its mirror at the opposite fixed point in `(q, s_l)`, the
//! exponential-coordinate `R•` series in `ħ`, the change of variables between
//! `q_l` and twist-insertion variables `x_i`, and the refined vertex of the
//! `(t, q)` formalism with its `Z̃` normalization.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::Zero;

use crate::characters::CharTable;
use crate::error::{Error, Result};
use crate::exact::{cyclo, CycloNumber, Rational};
use crate::hurwitz::phi_at;
use crate::partition::Partition;
use crate::series::{ei, ex, Expo, Monomial, MultiSeries, Truncation, Var};
use crate::symfunc::{Alphabet, AlphabetEval, RayRatio, ScaledMonomial};

/// Parameters of a one-leg vertex: orbifold order, leg profile, truncation.
#[derive(Clone, Debug)]
pub struct VertexParams {
    /// Root-construction order of the orbifold point (`a ≥ 1`).
    pub a: u32,
    /// Ramification profile carried by the leg.
    pub mu: Partition,
    /// Truncation for the ambient series ring.
    pub trunc: Truncation,
}

impl VertexParams {
    pub fn new(a: u32, mu: &Partition, trunc: &Truncation) -> Self {
        VertexParams {
            a,
            mu: mu.clone(),
            trunc: trunc.clone(),
        }
    }
}

/// Shared engine: `√-1^{|μ|} (step^{1/2} ∏_k orb_k^{-k/a})^{|μ|}
/// Σ_{|ν|=|μ|} s_{ν'}(rays) χ_ν(μ)/z_μ` over the union-of-rays alphabet.
fn one_leg(
    a: u32,
    mu: &Partition,
    step: Var,
    orb: fn(u8) -> Var,
    trunc: &Truncation,
) -> Result<MultiSeries> {
    if mu.is_empty() {
        return Err(Error::domain("vertex needs a nonempty profile"));
    }
    if a < 1 {
        return Err(Error::domain("orbifold order must be at least 1"));
    }
    let d = mu.size() as u32;
    let alphabet = Alphabet::orbifold_rays(a, step, orb);
    let mut eval = AlphabetEval::new(&alphabet, trunc);
    let table = CharTable::for_size(d);
    let mut sum = MultiSeries::zero(trunc);
    for nu in table.partitions() {
        let weight = table.value(nu, mu);
        if weight == 0 {
            continue;
        }
        let s = eval.schur(&nu.conjugate())?;
        sum = sum.add(&s.scale_rat(&Rational::new(
            weight.into(),
            (mu.z_factor() as i64).into(),
        )))?;
    }
    let mut pref = vec![(step, ex(d as i64, 2))];
    for k in 1..a {
        pref.push((orb(k as u8), ex(-(k as i64) * d as i64, a as i64)));
    }
    Ok(sum.mul_monomial(
        &Monomial::new(&pref),
        &cyclo(4, d as i64),
    ))
}

/// The one-leg effective refined vertex at the order-`a` point: a series in
/// `t` (half-integer exponents) and `q_1..q_{a-1}` (exact `1/a`-lattice
/// exponents) with coefficients in `Q(ζ_4, ζ_{2a})`.
pub fn refined_vertex(params: &VertexParams) -> Result<MultiSeries> {
    one_leg(params.a, &params.mu, Var::T, Var::Qk, &params.trunc)
}

/// The mirror vertex at the opposite fixed point: same series under the
/// renaming `t → q`, `q_k → s_k`.
pub fn vertex_at_infinity(params: &VertexParams) -> Result<MultiSeries> {
    one_leg(params.a, &params.mu, Var::Q, Var::Sl, &params.trunc)
}

/// Exponential coordinates `t = -q₀ = e^{√-1 ħ}` with the square-root branch
/// `q₀^{1/2} = ζ₄ e^{√-1 ħ/2}`.
///
/// The framing `τ = ε₁` and the Calabi-Yau relation `-ε₁-ε₂+τ-w = 0`
/// (equivalently `w = -ε₂`) are already imposed in every vertex formula, so
/// `ε₁, ε₂, u` never appear on their own: only `t` (respectively `q`) does.
pub struct ExpCoords {
    order: i64,
    trunc: Truncation,
}

impl ExpCoords {
    /// Coordinates in a plain `ħ`-graded ring of the given order.
    pub fn new(hbar_order: i64) -> Self {
        ExpCoords {
            order: hbar_order,
            trunc: Truncation::single(&[Var::Hbar], ei(hbar_order)),
        }
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    /// `-q₀ = e^{√-1 ħ}` as a truncated series.
    pub fn minus_q0(&self) -> MultiSeries {
        MultiSeries::monomial(&self.trunc, Monomial::var(Var::Hbar), cyclo(4, 1))
            .exp()
            .expect("linear exponent")
    }

    /// `(q₀^{1/2})^d = ζ₄^d e^{√-1 d ħ/2}` under the fixed branch.
    pub fn q0_half_pow(&self, d: u32) -> MultiSeries {
        MultiSeries::monomial(
            &self.trunc,
            Monomial::var(Var::Hbar),
            cyclo(4, 1).scale(&Rational::new((d as i64).into(), 2.into())),
        )
        .exp()
        .expect("linear exponent")
        .scale(&cyclo(4, d as i64))
    }

    /// The alphabet `-q• = (-Q, -Q q_{a-1}, ..., -Q q_1⋯q_{a-1})` with
    /// `-Q = (1, -q₀, (-q₀)², ...)`: `a` geometric rays of ratio `e^{√-1 ħ}`.
    pub fn q0_alphabet(&self, a: u32) -> Alphabet {
        let mut rays = Vec::with_capacity(a as usize);
        for k in 1..=a {
            let mut pref = ScaledMonomial::one();
            for j in k..a {
                pref = pref.mul(&ScaledMonomial::var_pow(Var::Qk(j as u8), ei(1)));
            }
            rays.push(Alphabet::Ray {
                prefactor: pref,
                ratio: RayRatio::ExpLinear {
                    coef: cyclo(4, 1),
                    var: Var::Hbar,
                },
            });
        }
        Alphabet::Union(rays)
    }

    /// Orbifold monomial `∏_k q_k^{-k d / a}`.
    fn orbifold_prefactor(a: u32, d: u32) -> Monomial {
        let pairs: Vec<(Var, Expo)> = (1..a)
            .map(|k| (Var::Qk(k as u8), ex(-(k as i64) * d as i64, a as i64)))
            .collect();
        Monomial::new(&pairs)
    }
}

/// Internal order padding for `ħ`-Laurent arithmetic: every power-sum factor
/// contributes a simple pole at `ħ = 0`, so products lose exactness near the
/// truncation boundary unless computed with slack.
fn hbar_slack(d: u32) -> i64 {
    2 * d as i64 + 2
}

/// `s_{ξ'}(-q•)` for every `ξ ⊢ d`, in character-table order, at the given
/// coordinate ring. The vertex and R-series contract this family against
/// characters over and over, so it is built once per `(a, d, order)` and
/// shared, like the character tables themselves.
fn exp_schur_family(coords: &ExpCoords, a: u32, d: u32) -> Result<Arc<Vec<MultiSeries>>> {
    type Cache = Mutex<HashMap<(u32, u32, i64), Arc<Vec<MultiSeries>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (a, d, coords.order);
    if let Some(f) = cache.lock().unwrap().get(&key) {
        return Ok(Arc::clone(f));
    }
    let alphabet = coords.q0_alphabet(a);
    let mut eval = AlphabetEval::new(&alphabet, coords.trunc());
    let table = CharTable::for_size(d);
    let mut family = Vec::with_capacity(table.partitions().len());
    for xi in table.partitions() {
        family.push(eval.schur(&xi.conjugate())?);
    }
    let family = Arc::new(family);
    cache
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&family));
    Ok(family)
}

/// `R•_μ(ħ; τ; x)_a` in exponential coordinates, exact through `ħ^order`:
/// `Σ_{|ν|=|μ|} (q₀^{1/2} q_1^{-1/a}⋯)^{|ν|} Σ_{|ξ|=|ν|} s_{ξ'}(-q•) χ_ξ(ν)
/// Φ•_{ν,μ}(√-1 ħ τ)`.
pub fn r_series(a: u32, mu: &Partition, tau: i64, order: u32) -> Result<MultiSeries> {
    let d = mu.size() as u32;
    let coords = ExpCoords::new(order as i64 + hbar_slack(d));
    let inner = r_series_at(&coords, a, mu, tau)?;
    inner.truncate(&Truncation::single(&[Var::Hbar], ei(order as i64)))
}

/// `R•` over an explicit coordinate ring (no final truncation); used where a
/// caller needs to keep the slack for further multiplication.
pub fn r_series_at(
    coords: &ExpCoords,
    a: u32,
    mu: &Partition,
    tau: i64,
) -> Result<MultiSeries> {
    if mu.is_empty() {
        return Err(Error::domain("R-series needs a nonempty profile"));
    }
    let d = mu.size() as u32;
    let trunc = coords.trunc();
    let family = exp_schur_family(coords, a, d)?;
    let table = CharTable::for_size(d);
    // Φ argument √-1 ħ τ
    let arg = MultiSeries::monomial(
        trunc,
        Monomial::var(Var::Hbar),
        cyclo(4, 1).scale(&Rational::from_integer(tau.into())),
    );
    let mut total = MultiSeries::zero(trunc);
    for nu in table.partitions() {
        let mut inner = MultiSeries::zero(trunc);
        for (xi, s) in table.partitions().iter().zip(family.iter()) {
            let weight = table.value(xi, nu);
            if weight == 0 {
                continue;
            }
            inner = inner.add(&s.scale_rat(&Rational::from_integer(weight.into())))?;
        }
        let phi = phi_at(nu, mu, &arg)?;
        total = total.add(&inner.mul(&phi)?)?;
    }
    let pref = coords
        .q0_half_pow(d)
        .mul_monomial(&ExpCoords::orbifold_prefactor(a, d), &CycloNumber::one());
    pref.mul(&total)
}

/// The image of [`refined_vertex`] under `t := e^{√-1 ħ}` with the fixed
/// branch `t^{1/2} := e^{√-1 ħ/2}`: the same character sum evaluated over
/// the exponential-coordinate alphabet. Termwise substitution of the
/// truncated `t`-series is ill-defined (the ratio has unit constant term),
/// so the coordinate change happens at the alphabet level.
pub fn refined_vertex_exp(a: u32, mu: &Partition, order: u32) -> Result<MultiSeries> {
    if mu.is_empty() {
        return Err(Error::domain("vertex needs a nonempty profile"));
    }
    let d = mu.size() as u32;
    let coords = ExpCoords::new(order as i64 + hbar_slack(d));
    let trunc = coords.trunc();
    let family = exp_schur_family(&coords, a, d)?;
    let table = CharTable::for_size(d);
    let mut sum = MultiSeries::zero(trunc);
    for (nu, s) in table.partitions().iter().zip(family.iter()) {
        let weight = table.value(nu, mu);
        if weight == 0 {
            continue;
        }
        sum = sum.add(&s.scale_rat(&Rational::new(
            weight.into(),
            (mu.z_factor() as i64).into(),
        )))?;
    }
    let pref = coords
        .q0_half_pow(d)
        .mul_monomial(&ExpCoords::orbifold_prefactor(a, d), &CycloNumber::one());
    pref.mul(&sum)?
        .truncate(&Truncation::single(&[Var::Hbar], ei(order as i64)))
}

/// Change of variables `q_l = ξ_a^{-1} exp(-Σ_i (w_a^{-2il}/a)(w_a^i - w_a^{-i}) x_i)`
/// as a series in `x_1..x_{a-1}` over `Q(ζ_{2a})`.
pub fn x_to_q(a: u32, l: u32, x_order: u32) -> Result<MultiSeries> {
    if l < 1 || l >= a {
        return Err(Error::domain(format!(
            "q_l index out of range: l = {l}, a = {a}"
        )));
    }
    let xvars: Vec<Var> = (1..a).map(|i| Var::Xi(i as u8)).collect();
    let trunc = Truncation::single(&xvars, ei(x_order as i64));
    let linear = x_linear_form(a, l, &trunc)?;
    let xi_inv = cyclo(a, -1);
    Ok(linear.exp()?.scale(&xi_inv))
}

/// The linear form `-Σ_i (w_a^{-2il}/a)(w_a^i - w_a^{-i}) x_i`.
fn x_linear_form(a: u32, l: u32, trunc: &Truncation) -> Result<MultiSeries> {
    let w = 2 * a; // w_a = ζ_{2a}
    let mut lin = MultiSeries::zero(trunc);
    for i in 1..a {
        let il = (i * l) as i64;
        let c = cyclo(w, -2 * il)
            .mul(&cyclo(w, i as i64).sub(&cyclo(w, -(i as i64))))
            .scale(&Rational::new((-1).into(), (a as i64).into()));
        lin = lin.add(&MultiSeries::monomial(
            trunc,
            Monomial::var(Var::Xi(i as u8)),
            c,
        ))?;
    }
    Ok(lin)
}

/// Fractional power `ξ_a^e` for `e` on the `1/a` lattice, with the branch
/// `ξ_a^{m/a} := ζ_{a²}^m`.
fn xi_fractional_power(a: u32, e: Expo) -> Result<CycloNumber> {
    let scaled = e * Expo::from_integer(a as i64);
    if !scaled.is_integer() {
        return Err(Error::domain(format!(
            "q_l exponent {e} is off the 1/{a} lattice"
        )));
    }
    Ok(cyclo(a * a, *scaled.numer()))
}

/// Expand every `q_l` power of a series back into twist variables:
/// `∏ q_l^{e_l} ↦ ξ_a^{-Σ e_l} exp(Σ_l e_l g_l)` where `g_l` is the linear
/// form of [`x_to_q`]. The result grades `x_1..x_{a-1}` at `x_order`.
pub fn to_x_coords(f: &MultiSeries, a: u32, x_order: u32) -> Result<MultiSeries> {
    let xvars: Vec<Var> = (1..a).map(|i| Var::Xi(i as u8)).collect();
    let mut trunc = f.trunc().clone();
    if a > 1 {
        trunc = trunc.graded(&xvars, ei(x_order as i64));
    }
    let linear_forms: Vec<MultiSeries> = (1..a)
        .map(|l| x_linear_form(a, l, &trunc))
        .collect::<Result<_>>()?;
    let mut expanded: HashMap<Monomial, MultiSeries> = HashMap::new();
    let mut out = MultiSeries::zero(&trunc);
    for (m, c) in f.iter() {
        let mut qpart: Vec<(Var, Expo)> = Vec::new();
        let mut rest: Vec<(Var, Expo)> = Vec::new();
        for &(v, e) in m.pairs() {
            match v {
                Var::Qk(_) => qpart.push((v, e)),
                _ => rest.push((v, e)),
            }
        }
        let qmono = Monomial::new(&qpart);
        let image = match expanded.entry(qmono) {
            std::collections::hash_map::Entry::Occupied(e) => e.get().clone(),
            std::collections::hash_map::Entry::Vacant(slot) => {
                let mut arg = MultiSeries::zero(&trunc);
                let mut xi_exp = Expo::zero();
                for &(v, e) in &qpart {
                    let Var::Qk(l) = v else { unreachable!() };
                    xi_exp -= e;
                    arg = arg.add(
                        &linear_forms[(l - 1) as usize]
                            .scale_rat(&Rational::new((*e.numer()).into(), (*e.denom()).into())),
                    )?;
                }
                let img = arg.exp()?.scale(&xi_fractional_power(a, xi_exp)?);
                slot.insert(img.clone());
                img
            }
        };
        out = out.add(&image.mul_monomial(&Monomial::new(&rest), c))?;
    }
    Ok(out)
}

/// `Z̃_ν(t,q) = ∏_{(i,j)∈ν} (1 - q^{ν_i-j} t^{ν'_j-i+1})^{-1}`.
pub fn z_tilde(nu: &Partition, trunc: &Truncation) -> Result<MultiSeries> {
    let conj = nu.conjugate();
    let mut out = MultiSeries::one(trunc);
    for (i0, &row) in nu.parts().iter().enumerate() {
        let i = i0 as i64 + 1;
        for j in 1..=row as i64 {
            let qe = row as i64 - j;
            let te = conj.part(j as usize - 1) as i64 - i + 1;
            let cell = MultiSeries::one(trunc).sub(&MultiSeries::monomial(
                trunc,
                Monomial::new(&[(Var::Q, ei(qe)), (Var::T, ei(te))]),
                CycloNumber::one(),
            ))?;
            out = out.mul(&cell.geom_inverse()?)?;
        }
    }
    Ok(out)
}

/// All partitions contained in both `bounds`.
fn contained_partitions(b1: &Partition, b2: &Partition) -> Vec<Partition> {
    let max = b1.size().min(b2.size()) as u32;
    let mut out = Vec::new();
    for k in 0..=max {
        for eta in Partition::enumerate(k) {
            if b1.contains(&eta) && b2.contains(&eta) {
                out.push(eta);
            }
        }
    }
    out
}

/// The refined vertex `C_{λμν}(t,q)`:
/// `q^{(‖μ‖²+‖ν‖²)/2} t^{-‖μ'‖²/2} Z̃_ν Σ_η (q/t)^{(|η|+|λ|-|μ|)/2}
/// s_{λ'/η}(t^{-ρ} q^{-ν}) s_{μ/η}(q^{-ρ} t^{-ν'})`,
/// exact through total `(t,q)` order `order`. The `η` sum is finite, cut by
/// diagram containment alone.
pub fn ikv_vertex(
    lam: &Partition,
    mu: &Partition,
    nu: &Partition,
    order: u32,
) -> Result<MultiSeries> {
    let target = Truncation::single(&[Var::T, Var::Q], ei(order as i64));
    // slack for the negative twist exponents q^{-ν}, t^{-ν'} plus the
    // total-degree drop of the q^{‖μ‖²/2} t^{-‖μ'‖²/2} prefactor
    let slack = (lam.size() + mu.size()) as i64 * (nu.part(0) as i64 + 1)
        + (mu.conjugate().norm_sq() as i64 - mu.norm_sq() as i64).max(0) / 2
        + 1;
    let trunc = Truncation::single(&[Var::T, Var::Q], ei(order as i64 + slack));
    let a_alpha = Alphabet::shifted_rho(nu, Var::T, Var::Q);
    let b_alpha = Alphabet::shifted_rho(&nu.conjugate(), Var::Q, Var::T);
    let mut a_eval = AlphabetEval::new(&a_alpha, &trunc);
    let mut b_eval = AlphabetEval::new(&b_alpha, &trunc);
    let lam_c = lam.conjugate();
    let mut sum = MultiSeries::zero(&trunc);
    for eta in contained_partitions(&lam_c, mu) {
        let sa = a_eval.skew_schur(&lam_c, &eta)?;
        if sa.is_zero() {
            continue;
        }
        let sb = b_eval.skew_schur(mu, &eta)?;
        if sb.is_zero() {
            continue;
        }
        let e = ex(
            eta.size() as i64 + lam.size() as i64 - mu.size() as i64,
            2,
        );
        let ratio = Monomial::new(&[(Var::Q, e), (Var::T, -e)]);
        sum = sum.add(&sa.mul(&sb)?.mul_monomial(&ratio, &CycloNumber::one()))?;
    }
    let zt = z_tilde(nu, &trunc)?;
    let pref = Monomial::new(&[
        (
            Var::Q,
            ex((mu.norm_sq() + nu.norm_sq()) as i64, 2),
        ),
        (Var::T, ex(-(mu.conjugate().norm_sq() as i64), 2)),
    ]);
    zt.mul(&sum)?
        .mul_monomial(&pref, &CycloNumber::one())
        .truncate(&target)
}
