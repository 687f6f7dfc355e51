//! Glued partition functions: the local football obtained from two one-leg
//! vertices, the product-formula route through the Cauchy identity, the
//! closed conifold logarithm, and the unrefined limit `q := t`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{CycloNumber, Rational};
use crate::partition::Partition;
use crate::series::{ei, ex, Expo, Monomial, MultiSeries, Truncation, Var};
use crate::symfunc::{cauchy_product, Alphabet, ScaledMonomial};
use crate::vertex::{refined_vertex, vertex_at_infinity, VertexParams};

/// Parameters of the glued partition function over the orbifold line with
/// root orders `a` at one fixed point and `b` at the other.
#[derive(Clone, Debug)]
pub struct FootballParams {
    pub a: u32,
    pub b: u32,
    /// Maximum degree in the Kähler parameter `Q`.
    pub q_order: u32,
    /// Graded order in `t` and `q` (one group, total degree).
    pub order: u32,
}

impl FootballParams {
    pub fn new(a: u32, b: u32, q_order: u32, order: u32) -> Self {
        FootballParams {
            a,
            b,
            q_order,
            order,
        }
    }

    /// `t, q` in one graded group; `Q` in its own group.
    pub fn trunc(&self) -> Truncation {
        Truncation::new()
            .graded(&[Var::T, Var::Q], ei(self.order as i64))
            .graded(&[Var::Deg], ei(self.q_order as i64))
    }
}

/// The glued sum
/// `Z = 1 + Σ_{1≤|μ|≤Q_order} V_a(μ) (-1)^{l(μ)-|μ|} Q^{|μ|} z_μ V_b^∞(μ)`,
/// with the sign and `z_μ` applied at the gluing site so each factor stays
/// the plain one-leg vertex.
pub fn football_sum(params: &FootballParams) -> Result<MultiSeries> {
    if params.a < 1 || params.b < 1 {
        return Err(Error::domain("root orders must be at least 1"));
    }
    let trunc = params.trunc();
    let mut profiles = Vec::new();
    for d in 1..=params.q_order {
        profiles.extend(Partition::enumerate(d));
    }
    let terms: Vec<Result<MultiSeries>> = profiles
        .par_iter()
        .map(|mu| -> Result<MultiSeries> {
            let v0 = refined_vertex(&VertexParams::new(params.a, mu, &trunc))?;
            let vinf = vertex_at_infinity(&VertexParams::new(params.b, mu, &trunc))?;
            let d = mu.size() as i64;
            let sign = if (mu.len() as i64 + d) % 2 == 0 { 1 } else { -1 };
            let weight = CycloNumber::from_rational(Rational::from_integer(
                (sign * mu.z_factor() as i64).into(),
            ));
            let site = Monomial::new(&[(Var::Deg, ei(d))]);
            Ok(v0.mul(&vinf)?.mul_monomial(&site, &weight))
        })
        .collect();
    let mut z = MultiSeries::one(&trunc);
    for t in terms {
        z = z.add(&t?)?;
    }
    Ok(z)
}

/// The same partition function as the double product
/// `∏_{i,j≥0} ∏_{k≤a, l≤b} (1 - Q t^{i+1/2} q^{j+1/2} q̂_k ŝ_l
///   q_1^{-1/a}⋯q_{a-1}^{-(a-1)/a} s_1^{-1/b}⋯s_{b-1}^{-(b-1)/b})`,
/// evaluated through the Cauchy device over two scaled union-of-rays
/// alphabets. The global fractional monomial is read as part of each
/// factor.
pub fn football_product(params: &FootballParams) -> Result<MultiSeries> {
    if params.a < 1 || params.b < 1 {
        return Err(Error::domain("root orders must be at least 1"));
    }
    let trunc = params.trunc();
    let a_scale = global_monomial(params.a, Var::T, Var::Qk);
    let b_scale = global_monomial(params.b, Var::Q, Var::Sl);
    let a_alpha = Alphabet::orbifold_rays(params.a, Var::T, Var::Qk).scaled(&a_scale);
    let b_alpha = Alphabet::orbifold_rays(params.b, Var::Q, Var::Sl).scaled(&b_scale);
    cauchy_product(&a_alpha, &b_alpha, params.q_order, &trunc)
}

/// `step^{1/2} ∏_k orb_k^{-k/a}`.
fn global_monomial(a: u32, step: Var, orb: fn(u8) -> Var) -> ScaledMonomial {
    let mut pairs: Vec<(Var, Expo)> = vec![(step, ex(1, 2))];
    for k in 1..a {
        pairs.push((orb(k as u8), ex(-(k as i64), a as i64)));
    }
    ScaledMonomial::new(CycloNumber::one(), &pairs)
}

/// Closed logarithm of the `a = b = 1` partition function:
/// `-Σ_{d=1}^{Q_order} Q^d / (d (t^{d/2}-t^{-d/2})(q^{d/2}-q^{-d/2}))`,
/// each reciprocal expanded as `(t^{d/2}-t^{-d/2})^{-1} = -t^{d/2}/(1-t^d)`.
pub fn conifold_log(q_order: u32, order: u32) -> Result<MultiSeries> {
    let trunc = Truncation::new()
        .graded(&[Var::T, Var::Q], ei(order as i64))
        .graded(&[Var::Deg], ei(q_order as i64));
    let mut total = MultiSeries::zero(&trunc);
    for d in 1..=q_order as i64 {
        let geo = |v: Var| -> Result<MultiSeries> {
            MultiSeries::one(&trunc)
                .sub(&MultiSeries::var_pow(&trunc, v, ei(d)))?
                .geom_inverse()
        };
        let m = Monomial::new(&[(Var::Deg, ei(d)), (Var::T, ex(d, 2)), (Var::Q, ex(d, 2))]);
        let term = geo(Var::T)?
            .mul(&geo(Var::Q)?)?
            .mul_monomial(&m, &CycloNumber::from_rational(Rational::new((-1).into(), d.into())));
        total = total.add(&term)?;
    }
    Ok(total)
}

/// The unrefined limit `q := t` (half-integer exponents merge on the common
/// lattice).
pub fn unrefined_limit(f: &MultiSeries) -> Result<MultiSeries> {
    f.substitute(Var::Q, &MultiSeries::var(f.trunc(), Var::T))
}
