//! Runtime verification of every cross-oracle identity the crate ships.
//!
//! Each check recomputes one family of identities along two independent
//! routes and demands exact equality of the truncated series (tolerance
//! zero). The CLI `selfcheck` subcommand and the acceptance test suite both
//! run these.

use std::time::Instant;

use crate::characters::CharTable;
use crate::exact::{cyclo, rat, rat_int, CycloNumber, Rational};
use crate::gluing::{conifold_log, football_product, football_sum, unrefined_limit, FootballParams};
use crate::hurwitz::{brute_force_hurwitz, hurwitz_number, phi, phi_at, phi_compose_check};
use crate::partition::Partition;
use crate::series::{ei, ex, Monomial, MultiSeries, Truncation, Var};
use crate::symfunc::{cauchy_product, hook_principal, schur, skew_schur, Alphabet};
use crate::vertex::{
    ikv_vertex, r_series, r_series_at, refined_vertex, refined_vertex_exp, z_tilde, ExpCoords,
    VertexParams,
};

type CheckResult = std::result::Result<(), String>;

/// Outcome of one acceptance criterion.
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn err_str<T>(r: crate::error::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// 1. Character integrity for all `d ≤ 8`.
pub fn check_characters() -> CheckResult {
    for d in 1..=8u32 {
        let table = CharTable::for_size(d);
        let parts = table.partitions();
        let one_d = err_str(Partition::new(vec![1; d as usize]))?;
        let mut dim_sq: i64 = 0;
        for lam in parts {
            let dim = table.value(lam, &one_d);
            ensure!(
                dim == lam.hook_dimension() as i64,
                "dimension of {lam} disagrees with hook formula"
            );
            dim_sq += dim * dim;
            for rho in parts {
                let mut s = Rational::new(0.into(), 1.into());
                for mu in parts {
                    let v = table.value(lam, mu) * table.value(rho, mu);
                    s += Rational::new(v.into(), (mu.z_factor() as i64).into());
                }
                let want = rat_int(i64::from(lam == rho));
                ensure!(s == want, "row orthogonality fails at d={d}, λ={lam}, ρ={rho}");
            }
        }
        let fact: i64 = (1..=d as i64).product();
        ensure!(dim_sq == fact, "Σ dim² != {d}! at d={d}");
        for mu in parts {
            for nu in parts {
                let s: i64 = parts
                    .iter()
                    .map(|lam| table.value(lam, mu) * table.value(lam, nu))
                    .sum();
                let want = if mu == nu { mu.z_factor() as i64 } else { 0 };
                ensure!(s == want, "column orthogonality fails at d={d}, μ={mu}, ν={nu}");
            }
        }
    }
    Ok(())
}

/// 2. Initial value, composition, and parity of `Φ•` for all `d ≤ 5`.
pub fn check_phi_structure() -> CheckResult {
    let order = 6u32;
    let trunc = Truncation::single(&[Var::Hbar], ei(order as i64));
    let h = MultiSeries::var(&trunc, Var::Hbar);
    for d in 1..=5u32 {
        let parts = Partition::enumerate(d);
        for nu in &parts {
            for mu in &parts {
                let f = err_str(phi(nu, mu, 0))?;
                let want = if nu == mu {
                    rat(1, nu.z_factor() as i64)
                } else {
                    rat_int(0)
                };
                ensure!(
                    f.coefficient(0) == want,
                    "Φ(0) != δ/z at ν={nu}, μ={mu}"
                );
                ensure!(
                    err_str(phi_compose_check(nu, mu, order))?,
                    "composition identity fails at ν={nu}, μ={mu}"
                );
                let plus = err_str(phi_at(nu, mu, &h))?;
                let minus = err_str(phi_at(nu, mu, &h.neg()))?;
                let want = if (nu.len() + mu.len()) % 2 == 0 {
                    plus.clone()
                } else {
                    plus.neg()
                };
                ensure!(minus == want, "parity fails at ν={nu}, μ={mu}");
            }
        }
    }
    Ok(())
}

/// 3. Burnside formula vs brute-force factorization counts, `d ≤ 5`, `r ≤ 4`.
pub fn check_burnside() -> CheckResult {
    ensure!(
        err_str(hurwitz_number(0, &two(), &two()))? == rat(1, 2),
        "worked value H = 1/2 at d=2, r=2 fails"
    );
    for d in 1..=5u32 {
        let parts = Partition::enumerate(d);
        for nu in &parts {
            for mu in &parts {
                for r in 0..=4u32 {
                    let chi = nu.len() as i64 + mu.len() as i64 - r as i64;
                    let burnside = err_str(hurwitz_number(chi, nu, mu))?;
                    let brute = err_str(brute_force_hurwitz(r, nu, mu))?;
                    ensure!(
                        burnside == brute,
                        "Burnside vs brute force at ν={nu}, μ={mu}, r={r}: {burnside} != {brute}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn two() -> Partition {
    Partition::new(vec![2]).unwrap()
}

/// 4. The framing-dependence identity
///    `R•_μ(ħ;τ) = Σ_ν R•_ν(ħ;0) z_ν Φ•_{ν,μ}(√-1 ħ τ)` for
///    `a ∈ {1,2,3}`, `|μ| ≤ 4`, `τ ∈ {1,2}`, `ħ`-order 6.
pub fn check_r_composition() -> CheckResult {
    let order = 6u32;
    let target = Truncation::single(&[Var::Hbar], ei(order as i64));
    for a in 1..=3u32 {
        for d in 1..=4u32 {
            let parts = Partition::enumerate(d);
            let coords = ExpCoords::new(order as i64 + 2 * d as i64 + 2);
            let initial: Vec<MultiSeries> = parts
                .iter()
                .map(|nu| err_str(r_series_at(&coords, a, nu, 0)))
                .collect::<std::result::Result<_, String>>()?;
            for tau in [1i64, 2] {
                let arg = MultiSeries::monomial(
                    coords.trunc(),
                    Monomial::var(Var::Hbar),
                    cyclo(4, 1).scale(&Rational::from_integer(tau.into())),
                );
                for mu in &parts {
                    let lhs = err_str(r_series(a, mu, tau, order))?;
                    let mut rhs = MultiSeries::zero(coords.trunc());
                    for (nu, init) in parts.iter().zip(&initial) {
                        let p = err_str(phi_at(nu, mu, &arg))?;
                        let z = Rational::from_integer((nu.z_factor() as i64).into());
                        rhs = err_str(rhs.add(&err_str(init.mul(&p))?.scale_rat(&z)))?;
                    }
                    let rhs = err_str(rhs.truncate(&target))?;
                    ensure!(
                        lhs == rhs,
                        "R-series composition fails at a={a}, μ={mu}, τ={tau}"
                    );
                }
            }
        }
    }
    Ok(())
}

/// 5. Exponential-coordinate coherence: the vertex under `t := e^{√-1 ħ}`
///    with the fixed branch equals `R•_μ(ħ; 0)`, `a ≤ 3`, `|μ| ≤ 4`.
pub fn check_vertex_exp_coherence() -> CheckResult {
    let order = 6u32;
    for a in 1..=3u32 {
        for d in 1..=4u32 {
            for mu in Partition::enumerate(d) {
                let lhs = err_str(refined_vertex_exp(a, &mu, order))?;
                let rhs = err_str(r_series(a, &mu, 0, order))?;
                ensure!(
                    lhs == rhs,
                    "exponential coordinates disagree at a={a}, μ={mu}"
                );
            }
        }
    }
    Ok(())
}

/// 6. Schur oracle triangle at `|λ| ≤ 6`, order 12, plus the dual Cauchy
///    identity through `Q⁴`.
pub fn check_schur_triangle() -> CheckResult {
    let trunc = Truncation::single(&[Var::T], ei(12));
    let principal = Alphabet::principal(Var::T);
    for d in 0..=6u32 {
        for lam in Partition::enumerate(d) {
            let via_chars = err_str(schur(&lam, &principal, &trunc))?;
            let via_jt = err_str(skew_schur(&lam, &Partition::empty(), &principal, &trunc))?;
            let via_hooks = err_str(hook_principal(&lam, Var::T, &trunc))?;
            ensure!(via_chars == via_jt, "character expansion != Jacobi-Trudi at λ={lam}");
            ensure!(via_chars == via_hooks, "character expansion != hook formula at λ={lam}");
        }
    }
    let q_order = 4u32;
    let ctrunc = Truncation::new()
        .graded(&[Var::T, Var::Q], ei(8))
        .graded(&[Var::Deg], ei(q_order as i64));
    let alphabets = [
        Alphabet::principal(Var::T),
        Alphabet::rho(Var::T),
        Alphabet::rho(Var::Q),
    ];
    for (i, a) in alphabets.iter().enumerate() {
        for (j, b) in alphabets.iter().enumerate() {
            let prod = err_str(cauchy_product(a, b, q_order, &ctrunc))?;
            let mut sum = MultiSeries::zero(&ctrunc);
            for d in 0..=q_order {
                for nu in Partition::enumerate(d) {
                    let sa = err_str(schur(&nu, a, &ctrunc))?;
                    let sb = err_str(schur(&nu.conjugate(), b, &ctrunc))?;
                    let sign = if d % 2 == 0 { 1 } else { -1 };
                    let qd = MultiSeries::monomial(
                        &ctrunc,
                        Monomial::new(&[(Var::Deg, ei(d as i64))]),
                        CycloNumber::from_int(sign),
                    );
                    sum = err_str(sum.add(&err_str(err_str(sa.mul(&sb))?.mul(&qd))?))?;
                }
            }
            ensure!(prod == sum, "dual Cauchy identity fails for pair ({i}, {j})");
        }
    }
    Ok(())
}

/// 7. The three 1-leg closed forms of the refined vertex match the general
///    formula with two legs empty (sizes ≤ 4, order 10), and the first
///    matches the smooth one-leg vertex through character inversion.
pub fn check_ikv_one_leg() -> CheckResult {
    let order = 10u32;
    let target = Truncation::single(&[Var::T, Var::Q], ei(order as i64));
    // closed forms are built with slack, shifted, then truncated: the
    // q^{‖μ‖²/2} t^{-‖μ'‖²/2} prefactor can lower total degree by up to 6
    let hi = Truncation::single(&[Var::T, Var::Q], ei(order as i64 + 8));
    let cut = |s: MultiSeries| -> std::result::Result<MultiSeries, String> {
        err_str(s.truncate(&target))
    };
    let empty = Partition::empty();
    for d in 0..=4u32 {
        for lam in Partition::enumerate(d) {
            // C_{λ∅∅} = (q/t)^{|λ|/2} s_{λ'}(t^{-ρ})
            let general = err_str(ikv_vertex(&lam, &empty, &empty, order))?;
            let ratio_half =
                Monomial::new(&[(Var::Q, ex(d as i64, 2)), (Var::T, ex(-(d as i64), 2))]);
            let closed = cut(
                err_str(schur(&lam.conjugate(), &Alphabet::rho(Var::T), &hi))?
                    .mul_monomial(&ratio_half, &CycloNumber::one()),
            )?;
            ensure!(general == closed, "C_{{λ∅∅}} closed form fails at λ={lam}");

            // C_{∅μ∅} = q^{‖μ‖²/2} t^{-‖μ'‖²/2} (q/t)^{-|μ|/2} s_μ(q^{-ρ})
            let general = err_str(ikv_vertex(&empty, &lam, &empty, order))?;
            let shift = Monomial::new(&[
                (Var::Q, ex(lam.norm_sq() as i64 - d as i64, 2)),
                (
                    Var::T,
                    ex(d as i64 - lam.conjugate().norm_sq() as i64, 2),
                ),
            ]);
            let closed = cut(
                err_str(schur(&lam, &Alphabet::rho(Var::Q), &hi))?
                    .mul_monomial(&shift, &CycloNumber::one()),
            )?;
            ensure!(general == closed, "C_{{∅μ∅}} closed form fails at μ={lam}");

            // C_{∅∅ν} = q^{‖ν‖²/2} Z̃_ν
            let general = err_str(ikv_vertex(&empty, &empty, &lam, order))?;
            let closed = cut(err_str(z_tilde(&lam, &hi))?.mul_monomial(
                &Monomial::new(&[(Var::Q, ex(lam.norm_sq() as i64, 2))]),
                &CycloNumber::one(),
            ))?;
            ensure!(general == closed, "C_{{∅∅ν}} closed form fails at ν={lam}");

            // smooth vertex consistency: character inversion of the a=1
            // vertex recovers s_{λ'}(t^{-ρ}), so
            // C_{λ∅∅} = (q/t)^{|λ|/2} ζ₄^{-|λ|} Σ_μ χ_λ(μ) V₁(μ)
            if d >= 1 {
                let table = CharTable::for_size(d);
                let mut inverted = MultiSeries::zero(&hi);
                for mu in table.partitions() {
                    let v = err_str(refined_vertex(&VertexParams::new(1, mu, &hi)))?;
                    let w = Rational::from_integer(table.value(&lam, mu).into());
                    inverted = err_str(inverted.add(&v.scale_rat(&w)))?;
                }
                let via_vertex = cut(inverted
                    .scale(&err_str(cyclo(4, 1).powi(-(d as i64)))?)
                    .mul_monomial(&ratio_half, &CycloNumber::one()))?;
                let general = err_str(ikv_vertex(&lam, &empty, &empty, order))?;
                ensure!(
                    general == via_vertex,
                    "1-leg vertex vs smooth refined vertex fails at λ={lam}"
                );
            }
        }
    }
    Ok(())
}

/// 8. Resolved conifold: glued sum = double product = exp of the closed
///    logarithm, through `Q⁴` at order 8; the `Q¹` log coefficient is
///    pinned.
pub fn check_conifold() -> CheckResult {
    let params = FootballParams::new(1, 1, 4, 8);
    let sum = err_str(football_sum(&params))?;
    let product = err_str(football_product(&params))?;
    ensure!(sum == product, "glued sum != double product for the conifold");
    let closed = err_str(conifold_log(4, 8))?;
    ensure!(
        err_str(closed.exp())? == product,
        "exp of the closed log != double product"
    );
    // [Q¹] log Z = -t^{1/2} q^{1/2} / ((1-t)(1-q))
    let strunc = Truncation::new().graded(&[Var::T, Var::Q], ei(8));
    let geo = |v: Var| -> std::result::Result<MultiSeries, String> {
        err_str(
            err_str(MultiSeries::one(&strunc).sub(&MultiSeries::var(&strunc, v)))?.geom_inverse(),
        )
    };
    let want = err_str(geo(Var::T)?.mul(&geo(Var::Q)?))?.mul_monomial(
        &Monomial::new(&[(Var::T, ex(1, 2)), (Var::Q, ex(1, 2))]),
        &CycloNumber::from_int(-1),
    );
    ensure!(
        closed.coefficient_of(Var::Deg, ei(1)) == want,
        "[Q¹] of the closed log disagrees with the one-box term"
    );
    Ok(())
}

/// 9. Local football: glued sum = double product for
///    `(a,b) ∈ {(2,1),(2,2),(3,1)}` through `Q³` at order 6, fractional
///    orbifold exponents included.
pub fn check_football() -> CheckResult {
    for (a, b) in [(2u32, 1u32), (2, 2), (3, 1)] {
        let params = FootballParams::new(a, b, 3, 6);
        let sum = err_str(football_sum(&params))?;
        let product = err_str(football_product(&params))?;
        ensure!(sum == product, "glued sum != double product at (a,b)=({a},{b})");
        // the orbifold lattice is genuinely fractional
        let has_fractional = sum.iter().any(|(m, _)| {
            m.pairs().iter().any(|(v, e)| {
                matches!(v, Var::Qk(_) | Var::Sl(_)) && !e.is_integer()
            })
        });
        ensure!(
            has_fractional,
            "expected fractional orbifold exponents at (a,b)=({a},{b})"
        );
    }
    Ok(())
}

/// 10. Unrefined limit: `q := t` in the glued conifold equals the product
///     formula built on the merged lattice, through `Q³`.
pub fn check_unrefined_limit() -> CheckResult {
    let params = FootballParams::new(1, 1, 3, 8);
    let z = err_str(football_sum(&params))?;
    let merged = err_str(unrefined_limit(&z))?;
    let direct = err_str(cauchy_product(
        &Alphabet::rho(Var::T),
        &Alphabet::rho(Var::T),
        3,
        &params.trunc(),
    ))?;
    ensure!(
        merged == direct,
        "unrefined limit disagrees with the merged-lattice product"
    );
    Ok(())
}

type NamedCheck = (&'static str, fn() -> CheckResult);

/// Run every acceptance criterion, in order.
pub fn run_all() -> Vec<CheckReport> {
    let checks: Vec<NamedCheck> = vec![
        ("character integrity (d <= 8)", check_characters),
        ("phi initial value, composition, parity (d <= 5)", check_phi_structure),
        ("Burnside formula vs brute-force counts (d <= 5, r <= 4)", check_burnside),
        ("R-series framing composition (a <= 3, |mu| <= 4)", check_r_composition),
        ("vertex exponential-coordinate coherence (a <= 3, |mu| <= 4)", check_vertex_exp_coherence),
        ("Schur oracle triangle and dual Cauchy (|lambda| <= 6)", check_schur_triangle),
        ("refined vertex 1-leg closed forms (size <= 4)", check_ikv_one_leg),
        ("resolved conifold sum/product/closed log (Q^4)", check_conifold),
        ("local football sum vs product (Q^3)", check_football),
        ("unrefined limit q := t (Q^3)", check_unrefined_limit),
    ];
    checks
        .into_iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let outcome = f();
            CheckReport {
                name,
                passed: outcome.is_ok(),
                detail: outcome.err().unwrap_or_default(),
                millis: start.elapsed().as_millis(),
            }
        })
        .collect()
}
