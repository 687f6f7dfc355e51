//! Exact coefficient arithmetic: arbitrary-precision rationals and elements
//! of cyclotomic fields `Q(ζ_N)`.
//!
//! A [`CycloNumber`] is stored in the power basis `1, ζ_N, ..., ζ_N^{φ(N)-1}`
//! of `Q[ζ_N]` modulo the N-th cyclotomic polynomial, which gives canonical
//! forms and exact equality. Arithmetic between two values first lifts both
//! to the conductor `lcm(N1, N2)`. A value whose non-constant coordinates are
//! all zero is collapsed to conductor 1, so it compares equal to its rational
//! constant no matter where it was produced.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Euler totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    let mut d: Vec<u32> = (1..=n).filter(|k| n.is_multiple_of(*k)).collect();
    d.sort_unstable();
    d
}

/// Coefficients of the N-th cyclotomic polynomial, ascending, monic.
///
/// Computed as `(x^N - 1) / prod_{d | N, d < N} Phi_d` by exact integer
/// division; results are memoized for the life of the process.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^N - 1
        let mut num = vec![BigInt::zero(); (n + 1) as usize];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in divisors(n) {
            if d < n {
                num = int_poly_exact_div(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials; the divisor must be monic and
/// divide the dividend exactly.
fn int_poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            quot[i] = c.clone();
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

// ---------------------------------------------------------------------------
// polynomial helpers over Q
// ---------------------------------------------------------------------------

fn poly_trim(p: &mut Vec<Rational>) {
    while let Some(last) = p.last() {
        if last.is_zero() {
            p.pop();
        } else {
            break;
        }
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `p` modulo the monic integer polynomial `m`, in place.
fn poly_rem_monic(p: &mut Vec<Rational>, m: &[BigInt]) {
    let dm = m.len() - 1;
    while p.len() > dm {
        let deg = p.len() - 1;
        let c = p[deg].clone();
        if !c.is_zero() {
            let shift = deg - dm;
            for (j, mc) in m.iter().enumerate() {
                let t = &c * Rational::from_integer(mc.clone());
                p[shift + j] -= t;
            }
        }
        p.pop();
        poly_trim(p);
        if p.len() <= dm {
            break;
        }
    }
    poly_trim(p);
}

/// Quotient and remainder of polynomial division over Q.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let lead = b[db].clone();
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() > db {
        let deg = rem.len() - 1;
        let c = &rem[deg] / &lead;
        quot[deg - db] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            let t = &c * bc;
            rem[deg - db + j] -= t;
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    poly_trim(&mut quot);
    (quot, rem)
}

// ---------------------------------------------------------------------------
// CycloNumber
// ---------------------------------------------------------------------------

/// Element of the cyclotomic field `Q(ζ_N)` in the power basis modulo `Φ_N`.
#[derive(Clone, Debug)]
pub struct CycloNumber {
    conductor: u32,
    /// Coordinates in the basis `1, ζ, ..., ζ^{φ(N)-1}`; trailing zeros kept.
    coords: Vec<Rational>,
}

impl CycloNumber {
    fn from_poly(conductor: u32, mut coords: Vec<Rational>) -> Self {
        let phi = euler_phi(conductor) as usize;
        if coords.len() > phi {
            poly_rem_monic(&mut coords, &cyclotomic_poly(conductor));
        }
        coords.resize(phi, Rational::zero());
        let mut v = CycloNumber { conductor, coords };
        v.collapse();
        v
    }

    /// Collapse to conductor 1 when all non-constant coordinates vanish.
    fn collapse(&mut self) {
        if self.conductor != 1 && self.coords[1..].iter().all(|c| c.is_zero()) {
            self.conductor = 1;
            self.coords.truncate(1);
        }
    }

    pub fn zero() -> Self {
        CycloNumber {
            conductor: 1,
            coords: vec![Rational::zero()],
        }
    }

    pub fn one() -> Self {
        CycloNumber {
            conductor: 1,
            coords: vec![Rational::one()],
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloNumber {
            conductor: 1,
            coords: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    /// `ζ_4 = √-1`.
    pub fn sqrt_minus_one() -> Self {
        cyclo(4, 1)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coords[0].is_one()
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.conductor == 1 {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Coordinates lifted to a conductor `m` divisible by `self.conductor`.
    fn lift_coords(&self, m: u32) -> Vec<Rational> {
        debug_assert!(m.is_multiple_of(self.conductor));
        if m == self.conductor {
            return self.coords.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coords.len() - 1) * step + 1];
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                poly[i * step] = c.clone();
            }
        }
        poly_rem_monic(&mut poly, &cyclotomic_poly(m));
        poly.resize(euler_phi(m) as usize, Rational::zero());
        poly
    }

    /// The same value represented at conductor `m` (requires `N | m`).
    pub fn lift(&self, m: u32) -> Result<CycloNumber> {
        if !m.is_multiple_of(self.conductor) {
            return Err(Error::domain(format!(
                "cannot lift conductor {} to {}",
                self.conductor, m
            )));
        }
        let mut v = CycloNumber {
            conductor: m,
            coords: self.lift_coords(m),
        };
        v.collapse();
        Ok(v)
    }

    pub fn add(&self, other: &CycloNumber) -> CycloNumber {
        if self.conductor == other.conductor {
            let coords = self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect();
            let mut v = CycloNumber {
                conductor: self.conductor,
                coords,
            };
            v.collapse();
            return v;
        }
        let m = self.conductor.lcm(&other.conductor);
        let a = self.lift_coords(m);
        let b = other.lift_coords(m);
        let coords = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let mut v = CycloNumber { conductor: m, coords };
        v.collapse();
        v
    }

    pub fn neg(&self) -> CycloNumber {
        CycloNumber {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &CycloNumber) -> CycloNumber {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycloNumber) -> CycloNumber {
        if self.conductor == 1 {
            if self.coords[0].is_zero() {
                return CycloNumber::zero();
            }
            return other.scale(&self.coords[0]);
        }
        if other.conductor == 1 {
            return self.scale(&other.coords[0]);
        }
        let m = self.conductor.lcm(&other.conductor);
        let a = self.lift_coords(m);
        let b = other.lift_coords(m);
        let prod = poly_mul(&a, &b);
        CycloNumber::from_poly(m, prod)
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, r: &Rational) -> CycloNumber {
        if r.is_zero() {
            return CycloNumber::zero();
        }
        let mut v = CycloNumber {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| c * r).collect(),
        };
        v.collapse();
        v
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[x]`.
    pub fn inv(&self) -> Result<CycloNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(CycloNumber::from_rational(self.coords[0].recip()));
        }
        let phi: Vec<Rational> = cyclotomic_poly(self.conductor)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let mut f = self.coords.clone();
        poly_trim(&mut f);
        // Invariants: r0 = u0*f mod phi, r1 = u1*f mod phi.
        let mut r0 = phi;
        let mut u0: Vec<Rational> = Vec::new();
        let mut r1 = f;
        let mut u1 = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, rem) = poly_divmod(&r0, &r1);
            let qu = poly_mul(&q, &u1);
            let mut nu = u0.clone();
            nu.resize(nu.len().max(qu.len()), Rational::zero());
            for (i, c) in qu.iter().enumerate() {
                nu[i] -= c;
            }
            poly_trim(&mut nu);
            r0 = std::mem::replace(&mut r1, rem);
            u0 = std::mem::replace(&mut u1, nu);
        }
        // r0 is the gcd; it must be a nonzero constant since Phi_N is
        // irreducible and f is nonzero of smaller degree.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let coords = u0.iter().map(|x| x * &c).collect();
        Ok(CycloNumber::from_poly(self.conductor, coords))
    }

    /// Integer power (negative exponents invert first).
    pub fn powi(&self, k: i64) -> Result<CycloNumber> {
        if k < 0 {
            return self.inv()?.powi(-k);
        }
        let mut result = CycloNumber::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// JSON rendering `{"conductor": N, "coords": ["p/q", ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "conductor": self.conductor,
            "coords": self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Text rendering: plain rationals, `a+b*i` when the conductor divides 4,
    /// otherwise a polynomial in `zetaN`.
    pub fn to_text(&self) -> String {
        if let Some(r) = self.as_rational() {
            return r.to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sym = if k == 0 {
                String::new()
            } else if self.conductor == 4 {
                "i".to_string()
            } else if k == 1 {
                format!("zeta{}", self.conductor)
            } else {
                format!("zeta{}^{}", self.conductor, k)
            };
            let term = if sym.is_empty() {
                c.to_string()
            } else if c.is_one() {
                sym
            } else if (-c).is_one() {
                format!("-{sym}")
            } else {
                format!("{c}*{sym}")
            };
            if parts.is_empty() {
                parts.push(term);
            } else if let Some(rest) = term.strip_prefix('-') {
                parts.push(format!(" - {rest}"));
            } else {
                parts.push(format!(" + {term}"));
            }
        }
        parts.concat()
    }
}

/// The root of unity `ζ_N^k`, reduced modulo `Φ_N`.
pub fn cyclo(n: u32, k: i64) -> CycloNumber {
    assert!(n >= 1, "conductor must be positive");
    let k = k.rem_euclid(n as i64) as usize;
    let mut coords = vec![Rational::zero(); k + 1];
    coords[k] = Rational::one();
    CycloNumber::from_poly(n, coords)
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let m = self.conductor.lcm(&other.conductor);
        self.lift_coords(m) == other.lift_coords(m)
    }
}

impl Eq for CycloNumber {}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl std::ops::Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::add(self, rhs)
    }
}

impl std::ops::Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::sub(self, rhs)
    }
}

impl std::ops::Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::mul(self, rhs)
    }
}

impl std::ops::Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys_small() {
        let p4 = cyclotomic_poly(4); // x^2 + 1
        assert_eq!(p4, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        let p6 = cyclotomic_poly(6); // x^2 - x + 1
        assert_eq!(p6, vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
        let p12 = cyclotomic_poly(12); // x^4 - x^2 + 1
        assert_eq!(
            p12,
            vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn zeta_powers() {
        assert_eq!(cyclo(4, 2), CycloNumber::from_int(-1));
        assert_eq!(cyclo(1, 0), CycloNumber::one());
        assert_eq!(cyclo(8, 4), CycloNumber::from_int(-1));
    }

    #[test]
    fn gaussian_product() {
        // (1 + i)(1 - i) = 2
        let i = CycloNumber::sqrt_minus_one();
        let a = CycloNumber::one().add(&i);
        let b = CycloNumber::one().sub(&i);
        assert_eq!(a.mul(&b), CycloNumber::from_int(2));
    }

    #[test]
    fn root_of_unity_inverse() {
        assert_eq!(cyclo(3, 1).inv().unwrap(), cyclo(3, 2));
    }

    #[test]
    fn conjugate_sixth_roots() {
        // zeta6 + zeta6^5 = 1, the trace of a root of x^2 - x + 1
        let s = cyclo(6, 1).add(&cyclo(6, 5));
        assert_eq!(s, CycloNumber::one());
        assert!(s.as_rational().is_some());
    }

    #[test]
    fn inverse_pairs_up_to_24() {
        for n in 1..=24u32 {
            for k in 0..n as i64 {
                let prod = cyclo(n, k).mul(&cyclo(n, n as i64 - k));
                assert_eq!(prod, CycloNumber::one(), "zeta_{n}^{k}");
            }
        }
    }

    #[test]
    fn power_sums_vanish() {
        for n in 2..=24u32 {
            let mut s = CycloNumber::zero();
            for k in 0..n as i64 {
                s = s.add(&cyclo(n, k));
            }
            assert!(s.is_zero(), "sum of all {n}-th roots");
        }
    }

    #[test]
    fn lift_roundtrip() {
        for (n, m) in [(4u32, 12u32), (3, 12), (6, 24), (8, 24), (1, 7)] {
            for k in 0..n as i64 {
                let x = cyclo(n, k);
                let lifted = x.lift(m).unwrap();
                assert_eq!(lifted, x);
                // representation at the larger conductor still collapses back
                assert_eq!(lifted.add(&CycloNumber::zero()), x);
            }
        }
    }

    #[test]
    fn field_inverse_random_elements() {
        // (2 + 3 zeta12 - zeta12^3) has an inverse; check x * inv(x) = 1
        let x = CycloNumber::from_int(2)
            .add(&cyclo(12, 1).scale(&rat_int(3)))
            .sub(&cyclo(12, 3));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), CycloNumber::one());
    }

    #[test]
    fn zero_inverse_rejected() {
        assert!(matches!(
            CycloNumber::zero().inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn mixed_conductor_arithmetic() {
        // i * zeta3 = zeta12^7
        let p = cyclo(4, 1).mul(&cyclo(3, 1));
        assert_eq!(p, cyclo(12, 7));
    }

    #[test]
    fn json_shape() {
        let v = cyclo(4, 1).to_json();
        assert_eq!(v["conductor"], 4);
        assert_eq!(v["coords"][0], "0");
        assert_eq!(v["coords"][1], "1");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_cyclo() -> impl Strategy<Value = CycloNumber> {
            // small rational combinations of roots of unity at conductors
            // 1, 3, 4, 8, 12
            (
                prop::sample::select(vec![1u32, 3, 4, 8, 12]),
                prop::collection::vec((-3i64..=3, 1i64..=2, 0i64..=11), 0..3),
            )
                .prop_map(|(n, parts)| {
                    let mut x = CycloNumber::zero();
                    for (num, den, k) in parts {
                        x = x.add(&cyclo(n, k).scale(&rat(num, den)));
                    }
                    x
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn field_laws(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(
                    a.mul(&b.add(&c)),
                    a.mul(&b).add(&a.mul(&c))
                );
                prop_assert_eq!(a.sub(&a), CycloNumber::zero());
            }

            #[test]
            fn inverses_multiply_to_one(a in arb_cyclo()) {
                if !a.is_zero() {
                    let inv = a.inv().unwrap();
                    prop_assert_eq!(a.mul(&inv), CycloNumber::one());
                }
            }
        }
    }
}
