//! Sparse multivariate truncated formal series with exact rational exponents
//! over cyclotomic coefficients.
//!
//! Variables are split into *graded* groups, each carrying a truncation
//! order: a term is retained iff for every group the total degree of the
//! term in that group's variables is at most the group's order. Variables
//! outside every group are *ungraded*: their exponents are exact and never
//! truncated (all our generating functions have finitely many such exponents
//! at each graded order). Graded exponents may be negative as long as they
//! are bounded below on any one series (Laurent-with-floor discipline).

use std::collections::BTreeMap;
use std::fmt;

use num::rational::Ratio;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{CycloNumber, Rational};

/// Exact exponent: a rational with small numerator and denominator.
pub type Expo = Ratio<i64>;

/// Exponent `n/d`.
pub fn ex(n: i64, d: i64) -> Expo {
    Expo::new(n, d)
}

/// Integer exponent.
pub fn ei(n: i64) -> Expo {
    Expo::from_integer(n)
}

/// Formal variable names used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Refinement parameter `t`.
    T,
    /// Refinement parameter `q`.
    Q,
    /// Degree-tracking (Kähler) parameter `Q`.
    Deg,
    /// Genus parameter `ħ`.
    Hbar,
    /// Second genus parameter for two-point composition identities.
    Hbar2,
    /// Orbifold variable `q_k` at the order-`a` point, `1 ≤ k ≤ a−1`.
    Qk(u8),
    /// Orbifold variable `s_l` at the order-`b` point, `1 ≤ l ≤ b−1`.
    Sl(u8),
    /// Twist-insertion variable `x_i`.
    Xi(u8),
    /// Twist-insertion variable `y_j`.
    Yj(u8),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T => write!(f, "t"),
            Var::Q => write!(f, "q"),
            Var::Deg => write!(f, "Q"),
            Var::Hbar => write!(f, "hbar"),
            Var::Hbar2 => write!(f, "hbar2"),
            Var::Qk(k) => write!(f, "q{k}"),
            Var::Sl(l) => write!(f, "s{l}"),
            Var::Xi(i) => write!(f, "x{i}"),
            Var::Yj(j) => write!(f, "y{j}"),
        }
    }
}

/// A monomial: sorted `(variable, exponent)` pairs with nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, Expo)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, ei(1))])
    }

    /// Build from pairs; zero exponents are dropped, duplicates summed.
    pub fn new(pairs: &[(Var, Expo)]) -> Self {
        let mut m = BTreeMap::new();
        for &(v, e) in pairs {
            *m.entry(v).or_insert_with(Expo::zero) += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| !e.is_zero()).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> Expo {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or_else(Expo::zero)
    }

    pub fn pairs(&self) -> &[(Var, Expo)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = self.0[i].1 + other.0[j].1;
                    if !e.is_zero() {
                        out.push((self.0[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn pow(&self, k: Expo) -> Monomial {
        if k.is_zero() {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    pub fn inv(&self) -> Monomial {
        self.pow(ei(-1))
    }

    /// Remove one variable entirely.
    fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }
}

/// Truncation specification: disjoint groups of graded variables, each with
/// a nonnegative order. A term is kept iff its total degree in each group is
/// at most that group's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    groups: Vec<(Vec<Var>, Expo)>,
}

impl Truncation {
    pub fn new() -> Self {
        Truncation { groups: Vec::new() }
    }

    /// Single graded group.
    pub fn single(vars: &[Var], order: Expo) -> Self {
        Truncation::new().graded(vars, order)
    }

    /// Add a graded group. Panics on duplicate variables or negative order.
    pub fn graded(mut self, vars: &[Var], order: Expo) -> Self {
        assert!(!order.is_negative(), "truncation order must be >= 0");
        let mut vs: Vec<Var> = vars.to_vec();
        vs.sort_unstable();
        vs.dedup();
        assert_eq!(vs.len(), vars.len(), "duplicate graded variable");
        for (g, _) in &self.groups {
            assert!(
                vs.iter().all(|v| !g.contains(v)),
                "variable already graded in another group"
            );
        }
        self.groups.push((vs, order));
        self
    }

    pub fn groups(&self) -> &[(Vec<Var>, Expo)] {
        &self.groups
    }

    pub fn is_graded(&self, v: Var) -> bool {
        self.groups.iter().any(|(g, _)| g.contains(&v))
    }

    /// Degree of a monomial in each group, in group order.
    pub fn degrees(&self, m: &Monomial) -> Vec<Expo> {
        self.groups
            .iter()
            .map(|(g, _)| {
                m.pairs()
                    .iter()
                    .filter(|(v, _)| g.contains(v))
                    .map(|(_, e)| *e)
                    .sum()
            })
            .collect()
    }

    /// Total graded degree across all groups.
    pub fn total_degree(&self, m: &Monomial) -> Expo {
        self.degrees(m).into_iter().sum()
    }

    pub fn retains(&self, m: &Monomial) -> bool {
        self.groups.iter().all(|(g, order)| {
            let d: Expo = m
                .pairs()
                .iter()
                .filter(|(v, _)| g.contains(v))
                .map(|(_, e)| *e)
                .sum();
            d <= *order
        })
    }

    fn ensure_compatible(&self, other: &Truncation) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Truncation(format!("{self:?} vs {other:?}")))
        }
    }

    /// Same group structure with the order of every group lowered to
    /// `orders[i]`.
    pub fn with_orders(&self, orders: &[Expo]) -> Truncation {
        assert_eq!(orders.len(), self.groups.len());
        Truncation {
            groups: self
                .groups
                .iter()
                .zip(orders)
                .map(|((g, _), o)| (g.clone(), *o))
                .collect(),
        }
    }

    fn remove_var(&self, v: Var) -> Truncation {
        Truncation {
            groups: self
                .groups
                .iter()
                .map(|(g, o)| (g.iter().copied().filter(|w| *w != v).collect(), *o))
                .collect(),
        }
    }

    fn rename(&self, map: &dyn Fn(Var) -> Var) -> Truncation {
        Truncation {
            groups: self
                .groups
                .iter()
                .map(|(g, o)| {
                    let mut vs: Vec<Var> = g.iter().map(|&v| map(v)).collect();
                    vs.sort_unstable();
                    vs.dedup();
                    (vs, *o)
                })
                .collect(),
        }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::new()
    }
}

/// Sparse truncated formal series over [`CycloNumber`] coefficients.
#[derive(Clone, Debug)]
pub struct MultiSeries {
    trunc: Truncation,
    terms: BTreeMap<Monomial, CycloNumber>,
}

impl MultiSeries {
    pub fn zero(trunc: &Truncation) -> Self {
        MultiSeries {
            trunc: trunc.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(trunc: &Truncation) -> Self {
        Self::constant(trunc, CycloNumber::one())
    }

    pub fn constant(trunc: &Truncation, c: CycloNumber) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(Monomial::one(), c);
        s
    }

    pub fn monomial(trunc: &Truncation, m: Monomial, c: CycloNumber) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(m, c);
        s
    }

    pub fn var(trunc: &Truncation, v: Var) -> Self {
        Self::monomial(trunc, Monomial::var(v), CycloNumber::one())
    }

    pub fn var_pow(trunc: &Truncation, v: Var, e: Expo) -> Self {
        Self::monomial(
            trunc,
            Monomial::new(&[(v, e)]),
            CycloNumber::one(),
        )
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &CycloNumber)> {
        self.terms.iter()
    }

    /// Coefficient of an exact monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> CycloNumber {
        self.terms.get(m).cloned().unwrap_or_else(CycloNumber::zero)
    }

    /// The sub-series multiplying `v^e`, with `v` removed from terms and
    /// from the truncation groups.
    pub fn coefficient_of(&self, v: Var, e: Expo) -> MultiSeries {
        let mut out = MultiSeries {
            trunc: self.trunc.remove_var(v),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            if m.exponent(v) == e {
                out.add_term(m.without(v), c.clone());
            }
        }
        out
    }

    /// All exponents of `v` that occur.
    pub fn exponents_of(&self, v: Var) -> Vec<Expo> {
        let mut es: Vec<Expo> = self.terms.keys().map(|m| m.exponent(v)).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    fn add_term(&mut self, m: Monomial, c: CycloNumber) {
        if c.is_zero() || !self.trunc.retains(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.trunc.ensure_compatible(&other.trunc)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiSeries {
        MultiSeries {
            trunc: self.trunc.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.trunc.ensure_compatible(&other.trunc)?;
        let mut out = MultiSeries::zero(&self.trunc);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if out.trunc.retains(&m) {
                    out.add_term(m, c1.mul(c2));
                }
            }
        }
        Ok(out)
    }

    /// Multiply by a single monomial with coefficient; an exact shift that
    /// loses no information beyond the truncation bound.
    pub fn mul_monomial(&self, m: &Monomial, c: &CycloNumber) -> MultiSeries {
        let mut out = MultiSeries::zero(&self.trunc);
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1.mul(c));
        }
        out
    }

    pub fn scale(&self, c: &CycloNumber) -> MultiSeries {
        self.mul_monomial(&Monomial::one(), c)
    }

    pub fn scale_rat(&self, r: &Rational) -> MultiSeries {
        self.scale(&CycloNumber::from_rational(r.clone()))
    }

    pub fn powi(&self, k: u32) -> MultiSeries {
        let mut result = MultiSeries::one(&self.trunc);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same spec");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same spec");
            }
        }
        result
    }

    /// Every term must have nonnegative degree in each group and positive
    /// total graded degree; this is what makes `Σ f^k / k!` finite under
    /// truncation.
    fn ensure_positive_graded(&self, what: &str) -> Result<()> {
        for m in self.terms.keys() {
            let degs = self.trunc.degrees(m);
            if degs.iter().any(|d| d.is_negative()) || !degs.iter().sum::<Expo>().is_positive() {
                return Err(Error::domain(format!(
                    "{what} requires strictly positive graded degree, found term {}",
                    render_monomial(m)
                )));
            }
        }
        Ok(())
    }

    /// `exp(f) = Σ_{k≥0} f^k / k!`; requires zero constant term (every term
    /// of positive graded degree).
    pub fn exp(&self) -> Result<MultiSeries> {
        self.ensure_positive_graded("exp_series")?;
        let mut acc = MultiSeries::one(&self.trunc);
        let mut pow = MultiSeries::one(&self.trunc);
        let mut kfact = Rational::one();
        let mut k: u64 = 0;
        loop {
            pow = pow.mul(self).expect("same spec");
            if pow.is_zero() {
                break;
            }
            k += 1;
            kfact *= Rational::from_integer(k.into());
            acc = acc.add(&pow.scale_rat(&kfact.recip())).expect("same spec");
        }
        Ok(acc)
    }

    /// `log(f)` for `f` with constant term exactly 1.
    pub fn log(&self) -> Result<MultiSeries> {
        let c0 = self.coefficient(&Monomial::one());
        if !c0.is_one() {
            return Err(Error::domain("log_series requires constant term 1"));
        }
        let g = self.sub(&MultiSeries::one(&self.trunc))?;
        g.ensure_positive_graded("log_series")?;
        let mut acc = MultiSeries::zero(&self.trunc);
        let mut pow = MultiSeries::one(&self.trunc);
        let mut k: u64 = 0;
        loop {
            pow = pow.mul(&g).expect("same spec");
            if pow.is_zero() {
                break;
            }
            k += 1;
            let coef = if k % 2 == 1 {
                Rational::new(1.into(), (k as i64).into())
            } else {
                Rational::new((-1).into(), (k as i64).into())
            };
            acc = acc.add(&pow.scale_rat(&coef)).expect("same spec");
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a series whose minimal-degree term is a
    /// single invertible monomial: `f = m(1+g)` gives `m^{-1} Σ (-g)^k`.
    pub fn geom_inverse(&self) -> Result<MultiSeries> {
        if self.is_zero() {
            return Err(Error::domain("geom_inverse of the zero series"));
        }
        // candidate leading monomial: minimal total graded degree
        let (lead_m, lead_c) = self
            .terms
            .iter()
            .min_by(|(m1, _), (m2, _)| {
                self.trunc
                    .total_degree(m1)
                    .cmp(&self.trunc.total_degree(m2))
                    .then_with(|| m1.cmp(m2))
            })
            .expect("nonempty");
        let lead_c_inv = lead_c.inv()?;
        let m_inv = lead_m.inv();
        let g = self
            .mul_monomial(&m_inv, &lead_c_inv)
            .sub(&MultiSeries::one(&self.trunc))?;
        g.ensure_positive_graded("geom_inverse")?;
        let mut acc = MultiSeries::one(&self.trunc);
        let mut pow = MultiSeries::one(&self.trunc);
        let mut sign = true;
        loop {
            pow = pow.mul(&g).expect("same spec");
            if pow.is_zero() {
                break;
            }
            let term = if sign { pow.neg() } else { pow.clone() };
            acc = acc.add(&term).expect("same spec");
            sign = !sign;
        }
        Ok(acc.mul_monomial(&m_inv, &lead_c_inv))
    }

    /// Substitute `g` for `var`. A single-monomial `g` may replace fractional
    /// powers of `var` (its coefficient must then be 1); a general `g` needs
    /// integral nonnegative exponents of `var` in `self` and strictly
    /// positive graded degree so the composition terminates. The result
    /// carries `g`'s truncation spec.
    pub fn substitute(&self, var: Var, g: &MultiSeries) -> Result<MultiSeries> {
        // single-monomial case: exact exponent arithmetic
        if g.num_terms() == 1 {
            let (gm, gc) = g.terms.iter().next().expect("single term");
            let mut out = MultiSeries::zero(&g.trunc);
            for (m, c) in &self.terms {
                let e = m.exponent(var);
                let coef = if e.is_zero() {
                    c.clone()
                } else if e.is_integer() {
                    c.mul(&gc.powi(*e.numer())?)
                } else if gc.is_one() {
                    c.clone()
                } else {
                    return Err(Error::domain(
                        "fractional substitution needs a monomial with coefficient 1",
                    ));
                };
                out.add_term(m.without(var).mul(&gm.pow(e)), coef);
            }
            return Ok(out);
        }
        if !self.trunc.is_graded(var) {
            return Err(Error::domain(
                "series substitution into an ungraded variable",
            ));
        }
        g.ensure_positive_graded("substitute")?;
        // group terms of self by the exponent of `var`
        let mut by_exp: BTreeMap<i64, MultiSeries> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if !e.is_integer() || e.is_negative() {
                return Err(Error::domain(
                    "series substitution needs nonnegative integer exponents",
                ));
            }
            by_exp
                .entry(*e.numer())
                .or_insert_with(|| MultiSeries::zero(&g.trunc))
                .add_term(m.without(var), c.clone());
        }
        let mut out = MultiSeries::zero(&g.trunc);
        let mut gpow = MultiSeries::one(&g.trunc);
        let mut cur: i64 = 0;
        for (e, part) in by_exp {
            while cur < e {
                gpow = gpow.mul(g)?;
                cur += 1;
            }
            out = out.add(&part.mul(&gpow)?)?;
        }
        Ok(out)
    }

    /// Lower truncation orders (group structure must match).
    pub fn truncate(&self, new: &Truncation) -> Result<MultiSeries> {
        if new.groups.len() != self.trunc.groups.len()
            || new
                .groups
                .iter()
                .zip(&self.trunc.groups)
                .any(|((g1, o1), (g2, o2))| g1 != g2 || o1 > o2)
        {
            return Err(Error::Truncation(
                "truncate requires the same groups with lower orders".into(),
            ));
        }
        let mut out = MultiSeries::zero(new);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Rebuild the series under a variable renaming (must stay injective on
    /// the variables that occur).
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Result<MultiSeries> {
        let trunc = self.trunc.rename(map);
        let mut out = MultiSeries::zero(&trunc);
        for (m, c) in &self.terms {
            let pairs: Vec<(Var, Expo)> =
                m.pairs().iter().map(|&(v, e)| (map(v), e)).collect();
            let nm = Monomial::new(&pairs);
            if nm.pairs().len() != m.pairs().len() {
                return Err(Error::domain("variable renaming is not injective"));
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// JSON rendering with terms sorted lexicographically by dense exponent
    /// vector.
    pub fn to_json(&self) -> serde_json::Value {
        let mut vars: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|(v, _)| *v))
            .collect();
        for (g, _) in self.trunc.groups() {
            vars.extend(g.iter().copied());
        }
        vars.sort_unstable();
        vars.dedup();
        let mut rows: Vec<(Vec<Expo>, &CycloNumber)> = self
            .terms
            .iter()
            .map(|(m, c)| (vars.iter().map(|&v| m.exponent(v)).collect(), c))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let order = if self.trunc.groups().len() == 1 {
            serde_json::Value::String(self.trunc.groups()[0].1.to_string())
        } else {
            let mut map = serde_json::Map::new();
            for (g, o) in self.trunc.groups() {
                let key = g
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                map.insert(key, serde_json::Value::String(o.to_string()));
            }
            serde_json::Value::Object(map)
        };
        serde_json::json!({
            "vars": vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "order": order,
            "terms": rows
                .iter()
                .map(|(es, c)| {
                    serde_json::json!({
                        "exp": es.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                        "coef": c.to_json(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn render_monomial(m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    m.pairs()
        .iter()
        .map(|(v, e)| {
            if e.is_one() {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl PartialEq for MultiSeries {
    /// Term-level equality; the truncation spec is not compared so that the
    /// same content reached along different spec layouts compares equal.
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MultiSeries {}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let minus_one = CycloNumber::from_int(-1);
        let mut first = true;
        for (m, c) in &self.terms {
            let cs = c.to_text();
            let body = if m.is_one() {
                cs
            } else if c.is_one() {
                render_monomial(m)
            } else if *c == minus_one {
                format!("-{}", render_monomial(m))
            } else if cs.contains(' ') {
                format!("({cs})*{}", render_monomial(m))
            } else {
                format!("{cs}*{}", render_monomial(m))
            };
            if first {
                write!(f, "{body}")?;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{cyclo, rat};
    use proptest::prelude::*;

    fn tq_spec(order: i64) -> Truncation {
        Truncation::single(&[Var::T, Var::Q], ei(order))
    }

    fn t_spec(order: i64) -> Truncation {
        Truncation::single(&[Var::T], ei(order))
    }

    fn tvar(spec: &Truncation) -> MultiSeries {
        MultiSeries::var(spec, Var::T)
    }

    #[test]
    fn product_of_conjugates() {
        let s = t_spec(4);
        let one = MultiSeries::one(&s);
        let f = one.add(&tvar(&s)).unwrap();
        let g = one.sub(&tvar(&s)).unwrap();
        let p = f.mul(&g).unwrap();
        let want = one
            .sub(&MultiSeries::var_pow(&s, Var::T, ei(2)))
            .unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn telescoping_truncates() {
        let s = t_spec(5);
        let mut f = MultiSeries::zero(&s);
        for i in 0..=5 {
            f = f
                .add(&MultiSeries::var_pow(&s, Var::T, ei(i)))
                .unwrap();
        }
        let g = MultiSeries::one(&s).sub(&tvar(&s)).unwrap();
        assert_eq!(f.mul(&g).unwrap(), MultiSeries::one(&s));
    }

    #[test]
    fn half_exponent_lattice() {
        let s = t_spec(3);
        let h = MultiSeries::var_pow(&s, Var::T, ex(1, 2));
        assert_eq!(h.mul(&h).unwrap(), tvar(&s));
    }

    #[test]
    fn exp_small() {
        let s = Truncation::single(&[Var::Xi(1)], ei(3));
        let x = MultiSeries::var(&s, Var::Xi(1));
        let e = x.exp().unwrap();
        let mut want = MultiSeries::one(&s).add(&x).unwrap();
        want = want
            .add(&x.powi(2).scale_rat(&rat(1, 2)))
            .unwrap()
            .add(&x.powi(3).scale_rat(&rat(1, 6)))
            .unwrap();
        assert_eq!(e, want);
    }

    #[test]
    fn exp_of_zero_and_inverse() {
        let s = Truncation::single(&[Var::Hbar], ei(6));
        assert_eq!(
            MultiSeries::zero(&s).exp().unwrap(),
            MultiSeries::one(&s)
        );
        let h = MultiSeries::var(&s, Var::Hbar);
        let p = h.exp().unwrap().mul(&h.neg().exp().unwrap()).unwrap();
        assert_eq!(p, MultiSeries::one(&s));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = t_spec(4);
        assert!(MultiSeries::one(&s).exp().is_err());
    }

    #[test]
    fn log_of_geometric() {
        let s = t_spec(4);
        let f = MultiSeries::one(&s).sub(&tvar(&s)).unwrap();
        let l = f.log().unwrap();
        // -t - t^2/2 - t^3/3 - t^4/4
        let mut want = MultiSeries::zero(&s);
        for k in 1..=4i64 {
            want = want
                .add(
                    &MultiSeries::var_pow(&s, Var::T, ei(k)).scale_rat(&rat(-1, k)),
                )
                .unwrap();
        }
        assert_eq!(l, want);
        assert!(MultiSeries::zero(&s).log().is_err());
    }

    #[test]
    fn log_multiplicative() {
        let s = tq_spec(6);
        let one = MultiSeries::one(&s);
        let f = one.sub(&MultiSeries::var(&s, Var::T)).unwrap();
        let g = one.sub(&MultiSeries::var(&s, Var::Q)).unwrap();
        let lhs = f.mul(&g).unwrap().log().unwrap();
        let rhs = f.log().unwrap().add(&g.log().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn geometric_inverses() {
        let s = t_spec(3);
        let f = MultiSeries::one(&s).sub(&tvar(&s)).unwrap();
        let inv = f.geom_inverse().unwrap();
        let mut want = MultiSeries::zero(&s);
        for i in 0..=3 {
            want = want
                .add(&MultiSeries::var_pow(&s, Var::T, ei(i)))
                .unwrap();
        }
        assert_eq!(inv, want);
        assert_eq!(f.mul(&inv).unwrap(), MultiSeries::one(&s));
    }

    #[test]
    fn scaled_geometric_inverse() {
        // 1/(2(1-t^2)) at order 4 -> 1/2 + t^2/2 + t^4/2
        let s = t_spec(4);
        let f = MultiSeries::constant(&s, CycloNumber::from_int(2))
            .sub(
                &MultiSeries::var_pow(&s, Var::T, ei(2))
                    .scale(&CycloNumber::from_int(2)),
            )
            .unwrap();
        let inv = f.geom_inverse().unwrap();
        let mut want = MultiSeries::zero(&s);
        for i in [0i64, 2, 4] {
            want = want
                .add(&MultiSeries::var_pow(&s, Var::T, ei(i)).scale_rat(&rat(1, 2)))
                .unwrap();
        }
        assert_eq!(inv, want);
    }

    #[test]
    fn laurent_inverse_with_monomial_lead() {
        // 1/(1 - Q t^{1/2}) at Q-order 2: 1 + Q t^{1/2} + Q^2 t
        let s = Truncation::new()
            .graded(&[Var::T], ei(8))
            .graded(&[Var::Deg], ei(2));
        let f = MultiSeries::one(&s)
            .sub(&MultiSeries::monomial(
                &s,
                Monomial::new(&[(Var::Deg, ei(1)), (Var::T, ex(1, 2))]),
                CycloNumber::one(),
            ))
            .unwrap();
        let inv = f.geom_inverse().unwrap();
        assert_eq!(f.mul(&inv).unwrap(), MultiSeries::one(&s));
        assert_eq!(inv.num_terms(), 3);
    }

    #[test]
    fn inverse_of_one_minus_exp() {
        // (1 - e^{hbar}) has leading monomial -hbar; its inverse is a
        // Laurent series with floor -1 and (1-e^h) * inv = 1 exactly.
        let s = Truncation::single(&[Var::Hbar], ei(6));
        let h = MultiSeries::var(&s, Var::Hbar);
        let f = MultiSeries::one(&s).sub(&h.exp().unwrap()).unwrap();
        let inv = f.geom_inverse().unwrap();
        let prod = f.mul(&inv).unwrap();
        // exact through order 6 - 2 after the shift; compare truncated
        let lowered = Truncation::single(&[Var::Hbar], ei(4));
        assert_eq!(
            prod.truncate(&lowered).unwrap(),
            MultiSeries::one(&lowered)
        );
        assert_eq!(
            inv.exponents_of(Var::Hbar).first().copied(),
            Some(ei(-1))
        );
    }

    #[test]
    fn geom_inverse_rejects_ungraded_tail() {
        // 1 + q1 would need infinitely many q1 powers; q1 is never truncated
        let s = t_spec(4);
        let f = MultiSeries::one(&s)
            .add(&MultiSeries::var(&s, Var::Qk(1)))
            .unwrap();
        assert!(f.geom_inverse().is_err());
        assert!(MultiSeries::zero(&s).geom_inverse().is_err());
    }

    #[test]
    fn substitution_monomial() {
        let s = tq_spec(6);
        let geo = MultiSeries::one(&s)
            .sub(&MultiSeries::var(&s, Var::Q))
            .unwrap()
            .geom_inverse()
            .unwrap();
        let sub = geo.substitute(Var::Q, &MultiSeries::var(&s, Var::T)).unwrap();
        let want = MultiSeries::one(&s)
            .sub(&MultiSeries::var(&s, Var::T))
            .unwrap()
            .geom_inverse()
            .unwrap();
        assert_eq!(sub, want);

        // t^{1/2} under t := q^2 becomes q
        let half = MultiSeries::var_pow(&s, Var::T, ex(1, 2));
        let q2 = MultiSeries::var_pow(&s, Var::Q, ei(2));
        assert_eq!(
            half.substitute(Var::T, &q2).unwrap(),
            MultiSeries::var(&s, Var::Q)
        );
    }

    #[test]
    fn substitution_series() {
        // exp(hbar) with hbar := -hbar equals exp(-hbar)
        let s = Truncation::single(&[Var::Hbar], ei(5));
        let h = MultiSeries::var(&s, Var::Hbar);
        let e = h.exp().unwrap();
        let negated = e.substitute(Var::Hbar, &h.neg()).unwrap();
        assert_eq!(negated, h.neg().exp().unwrap());

        // divergent composition rejected: constant term in a graded variable
        let bad = MultiSeries::one(&s).add(&h).unwrap();
        assert!(e.substitute(Var::Hbar, &bad).is_err());
    }

    #[test]
    fn incompatible_specs_rejected() {
        let a = MultiSeries::one(&t_spec(3));
        let b = MultiSeries::one(&t_spec(4));
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn order_zero_keeps_constants() {
        let s = t_spec(0);
        let f = MultiSeries::one(&s).add(&tvar(&s)).unwrap();
        assert_eq!(f, MultiSeries::one(&s));
    }

    #[test]
    fn json_deterministic_and_sorted() {
        let s = t_spec(2);
        let f = MultiSeries::one(&s)
            .add(&tvar(&s).scale(&cyclo(4, 1)))
            .unwrap();
        let j1 = f.to_json().to_string();
        let j2 = f.to_json().to_string();
        assert_eq!(j1, j2);
        assert!(j1.contains("\"vars\":[\"t\"]"));
    }

    // -- property tests ----------------------------------------------------

    fn arb_series(max_terms: usize) -> impl Strategy<Value = MultiSeries> {
        let spec = tq_spec(8);
        prop::collection::vec(
            ((0i64..=6, 0i64..=6), -4i64..=4, 1i64..=3),
            0..max_terms,
        )
        .prop_map(move |terms| {
            let mut f = MultiSeries::zero(&spec);
            for ((et, eq), num, den) in terms {
                f = f
                    .add(&MultiSeries::monomial(
                        &spec,
                        Monomial::new(&[(Var::T, ei(et)), (Var::Q, ei(eq))]),
                        CycloNumber::from_rational(rat(num, den)),
                    ))
                    .unwrap();
            }
            f
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ring_laws(f in arb_series(20), g in arb_series(20), h in arb_series(20)) {
            let fg = f.mul(&g).unwrap();
            let gf = g.mul(&f).unwrap();
            prop_assert_eq!(&fg, &gf);
            let lhs = fg.mul(&h).unwrap();
            let rhs = f.mul(&g.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let dist_l = f.add(&g).unwrap().mul(&h).unwrap();
            let dist_r = f.mul(&h).unwrap().add(&g.mul(&h).unwrap()).unwrap();
            prop_assert_eq!(dist_l, dist_r);
        }

        #[test]
        fn truncation_is_ring_homomorphism(f in arb_series(6), g in arb_series(6)) {
            let low = tq_spec(4);
            let direct = f.mul(&g).unwrap().truncate(&low).unwrap();
            let trunc_first = f
                .truncate(&low)
                .unwrap()
                .mul(&g.truncate(&low).unwrap())
                .unwrap();
            prop_assert_eq!(direct, trunc_first);
        }

        #[test]
        fn exp_log_roundtrip(f in arb_series(5)) {
            // force strictly positive degree: multiply everything by t
            let shifted = f.mul_monomial(&Monomial::var(Var::T), &CycloNumber::one());
            let spec_small = tq_spec(8);
            let e = shifted.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), shifted.clone());
            let one_plus = MultiSeries::one(&spec_small).add(&shifted).unwrap();
            let back = one_plus.log().unwrap().exp().unwrap();
            prop_assert_eq!(back, one_plus);
        }

        #[test]
        fn exp_is_homomorphism(f in arb_series(4), g in arb_series(4)) {
            let ft = f.mul_monomial(&Monomial::var(Var::T), &CycloNumber::one());
            let gt = g.mul_monomial(&Monomial::var(Var::Q), &CycloNumber::one());
            let lhs = ft.add(&gt).unwrap().exp().unwrap();
            let rhs = ft.exp().unwrap().mul(&gt.exp().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn geom_inverse_is_inverse(f in arb_series(5)) {
            // 1 + t*f is always invertible with leading monomial 1
            let g = MultiSeries::one(&tq_spec(8))
                .add(&f.mul_monomial(&Monomial::var(Var::T), &CycloNumber::one()))
                .unwrap();
            let inv = g.geom_inverse().unwrap();
            prop_assert_eq!(g.mul(&inv).unwrap(), MultiSeries::one(&tq_spec(8)));
        }
    }
}
