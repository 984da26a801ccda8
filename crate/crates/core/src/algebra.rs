//! Exact arithmetic substrate: arbitrary-precision rationals, quadratic
//! extension numbers `a + b*sqrt(d)`, and the extended line with `±inf`.
//!
//! Every geometric predicate in this crate bottoms out here. Floating point
//! never participates in a decision; it only appears in SVG emission and in
//! log-log exponent fits.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact rational number, always in canonical form (reduced, positive
/// denominator). `BigRational` maintains both invariants on construction.
pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Formats a rational as `p/q`, the canonical wire form (`3` prints as `3/1`).
pub fn rat_to_string(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn rat_from_str(s: &str) -> Result<Rat, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::ParseRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// Adding or multiplying two irrational values over different radicands
    /// would leave the `a + b*sqrt(d)` representation.
    UnsupportedMixedRadicals { d1: BigInt, d2: BigInt },
    /// Arithmetic on `+inf`/`-inf`; only comparison is defined there.
    InfiniteArithmetic,
    ParseRational(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::UnsupportedMixedRadicals { d1, d2 } => {
                write!(f, "unsupported mixed radicals sqrt({d1}) and sqrt({d2})")
            }
            AlgebraError::InfiniteArithmetic => write!(f, "arithmetic on infinite value"),
            AlgebraError::ParseRational(s) => write!(f, "cannot parse rational from {s:?}"),
        }
    }
}

impl std::error::Error for AlgebraError {}

/// Splits a non-negative integer as `s^2 * m` with `m` square-free, returning
/// `(s, m)`.
///
/// Trial division runs to `min(sqrt(n), 10^6)`; any cofactor left beyond that
/// is taken square-free after a perfect-square check. That is complete for
/// every `n < 10^12` and for larger `n` unless a prime-square factor above
/// `10^6` is present, which the desk-scale inputs here never produce.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(!n.is_negative());
    if n.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= rest && p <= limit {
        if (&rest % &p).is_zero() {
            let mut e = 0u32;
            while (&rest % &p).is_zero() {
                rest /= &p;
                e += 1;
            }
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                m *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if !rest.is_one() {
        let root = rest.sqrt();
        if &root * &root == rest {
            s *= root;
        } else {
            m *= rest;
        }
    }
    (s, m)
}

/// Sign of `p + q*sqrt(n)` for rationals `p, q` and a non-negative integer
/// radicand `n` (not necessarily square-free). Decided by case analysis on
/// signs and one exact squaring: `p^2` versus `q^2 * n`.
fn sign_with_radical(p: &Rat, q: &Rat, n: &BigInt) -> Ordering {
    if q.is_zero() || n.is_zero() {
        return p.cmp(&Rat::zero());
    }
    let sp = p.cmp(&Rat::zero());
    let sq = q.cmp(&Rat::zero());
    if sp == Ordering::Equal {
        return sq;
    }
    if sp == sq {
        return sp;
    }
    // Opposite signs: |p| vs |q|*sqrt(n) via p^2 vs q^2*n.
    let p2 = p * p;
    let q2n = q * q * Rat::from_integer(n.clone());
    match p2.cmp(&q2n) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Number of the form `a + b*sqrt(d)` with rational `a, b` and a square-free
/// integer radicand `d >= 0`. Canonical form: `b = 0` implies `d = 0`, so
/// rationals have a unique representation, and structural equality is value
/// equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: BigInt,
}

impl QuadExt {
    /// Builds `a + b*sqrt(d)`, canonicalizing the radicand (square part
    /// folded into `b`, `d = 0` or `1` folded away).
    pub fn new(a: Rat, b: Rat, d: BigInt) -> QuadExt {
        assert!(!d.is_negative(), "negative radicand");
        if b.is_zero() || d.is_zero() {
            return QuadExt {
                a,
                b: Rat::zero(),
                d: BigInt::zero(),
            };
        }
        let (s, m) = square_free_split(&d);
        let b = b * Rat::from_integer(s);
        if m.is_one() {
            QuadExt {
                a: a + b,
                b: Rat::zero(),
                d: BigInt::zero(),
            }
        } else {
            QuadExt { a, b, d: m }
        }
    }

    pub fn from_rat(a: Rat) -> QuadExt {
        QuadExt {
            a,
            b: Rat::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_int(n: i64) -> QuadExt {
        QuadExt::from_rat(rat_int(n))
    }

    pub fn zero() -> QuadExt {
        QuadExt::from_int(0)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn radical_coeff(&self) -> &Rat {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the value as a rational when it is one.
    pub fn as_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    pub fn add_rat(&self, r: &Rat) -> QuadExt {
        QuadExt {
            a: &self.a + r,
            b: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn mul_rat(&self, r: &Rat) -> QuadExt {
        if r.is_zero() {
            return QuadExt::zero();
        }
        QuadExt {
            a: &self.a * r,
            b: &self.b * r,
            d: self.d.clone(),
        }
    }

    fn same_field(&self, other: &QuadExt) -> bool {
        self.b.is_zero() || other.b.is_zero() || self.d == other.d
    }

    fn field_radicand(&self, other: &QuadExt) -> BigInt {
        if self.b.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }

    /// Exact sum; fails only for two irrational operands over different
    /// radicands, which leaves the representation.
    pub fn try_add(&self, other: &QuadExt) -> Result<QuadExt, AlgebraError> {
        if !self.same_field(other) {
            return Err(AlgebraError::UnsupportedMixedRadicals {
                d1: self.d.clone(),
                d2: other.d.clone(),
            });
        }
        let d = self.field_radicand(other);
        Ok(QuadExt::new(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_sub(&self, other: &QuadExt) -> Result<QuadExt, AlgebraError> {
        self.try_add(&other.neg())
    }

    /// Exact product within one quadratic field.
    pub fn try_mul(&self, other: &QuadExt) -> Result<QuadExt, AlgebraError> {
        if !self.same_field(other) {
            return Err(AlgebraError::UnsupportedMixedRadicals {
                d1: self.d.clone(),
                d2: other.d.clone(),
            });
        }
        let d = self.field_radicand(other);
        let rad = Rat::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * rad;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadExt::new(a, b, d))
    }

    pub fn square(&self) -> QuadExt {
        self.try_mul(self).expect("same field")
    }

    pub fn sign(&self) -> Ordering {
        sign_with_radical(&self.a, &self.b, &self.d)
    }

    /// Total exact order on represented real numbers, across radicands.
    ///
    /// Same-field comparisons reduce to one radical sign. For distinct
    /// radicands the difference `u + b1*sqrt(d1) - b2*sqrt(d2)` is resolved
    /// by comparing `u^2` against `(b1*sqrt(d1) - b2*sqrt(d2))^2`, whose sign
    /// is again a single-radical question over `sqrt(d1*d2)`.
    pub fn cmp_exact(&self, other: &QuadExt) -> Ordering {
        if self.same_field(other) {
            let d = self.field_radicand(other);
            return sign_with_radical(&(&self.a - &other.a), &(&self.b - &other.b), &d);
        }
        let u = &self.a - &other.a;
        // v = b1*sqrt(d1) - b2*sqrt(d2), both terms irrational here.
        let s1 = self.b.cmp(&Rat::zero());
        let s2 = other.b.cmp(&Rat::zero());
        let b1sq_d1 = &self.b * &self.b * Rat::from_integer(self.d.clone());
        let b2sq_d2 = &other.b * &other.b * Rat::from_integer(other.d.clone());
        let sign_v = if s1 != s2 {
            s1 // opposite nonzero signs: v keeps the sign of the first term
        } else {
            match b1sq_d1.cmp(&b2sq_d2) {
                Ordering::Greater => s1,
                Ordering::Less => s2.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        };
        let sign_u = u.cmp(&Rat::zero());
        if sign_v == Ordering::Equal {
            return sign_u;
        }
        if sign_u == Ordering::Equal || sign_u == sign_v {
            return sign_v;
        }
        // u and v have opposite signs; compare magnitudes via u^2 - v^2,
        // an element of Q(sqrt(d1*d2)).
        let p = &u * &u - b1sq_d1 - b2sq_d2;
        let q = rat_int(2) * &self.b * &other.b;
        let n = &self.d * &other.d;
        match sign_with_radical(&p, &q, &n) {
            Ordering::Greater => sign_u,
            Ordering::Less => sign_v,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Dyadic lower/upper bounds with `hi - lo <= |b| * 2^(1-bits)`.
    pub fn dyadic_bounds(&self, bits: u32) -> (Rat, Rat) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        // floor(sqrt(d * 4^bits)) / 2^bits <= sqrt(d) < (floor+1) / 2^bits
        let scaled = &self.d << (2 * bits);
        let root = scaled.sqrt();
        let denom = BigInt::one() << bits;
        let lo_r = Rat::new(root.clone(), denom.clone());
        let hi_r = Rat::new(root + 1, denom);
        let x = &self.a + &self.b * lo_r;
        let y = &self.a + &self.b * hi_r;
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Approximate value; for rendering and regression only.
    pub fn to_f64(&self) -> f64 {
        let ratf = |r: &Rat| {
            let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
            let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            n / d
        };
        let df = self.d.to_string().parse::<f64>().unwrap_or(f64::NAN);
        ratf(&self.a) + ratf(&self.b) * df.sqrt()
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// Total order of two quadratic extension numbers.
pub fn qe_cmp(x: &QuadExt, y: &QuadExt) -> Ordering {
    x.cmp_exact(y)
}

/// The extended line: `-inf < every finite value < +inf`. Arithmetic on the
/// infinities is not defined, only comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ext {
    NegInf,
    Finite(QuadExt),
    PosInf,
}

impl Ext {
    pub fn finite_rat(r: Rat) -> Ext {
        Ext::Finite(QuadExt::from_rat(r))
    }

    pub fn as_finite(&self) -> Option<&QuadExt> {
        match self {
            Ext::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn cmp_qe(&self, x: &QuadExt) -> Ordering {
        match self {
            Ext::NegInf => Ordering::Less,
            Ext::PosInf => Ordering::Greater,
            Ext::Finite(q) => q.cmp_exact(x),
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        use Ext::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp_exact(b),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "+inf"),
            Ext::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// Result of exact quadratic (or degenerate) root solving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadraticRoots {
    /// `0 = 0`: every real is a solution (coincident curves upstream).
    AllReals,
    /// The real roots in ascending order (0, 1 or 2 of them).
    Roots(Vec<QuadExt>),
}

impl QuadraticRoots {
    pub fn roots(&self) -> &[QuadExt] {
        match self {
            QuadraticRoots::AllReals => &[],
            QuadraticRoots::Roots(r) => r,
        }
    }
}

/// Exact real roots of `a*t^2 + b*t + c = 0`, ascending.
pub fn solve_quadratic(a: &Rat, b: &Rat, c: &Rat) -> QuadraticRoots {
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() {
                QuadraticRoots::AllReals
            } else {
                QuadraticRoots::Roots(vec![])
            };
        }
        return QuadraticRoots::Roots(vec![QuadExt::from_rat(-c / b)]);
    }
    let disc = b * b - rat_int(4) * a * c;
    match disc.cmp(&Rat::zero()) {
        Ordering::Less => QuadraticRoots::Roots(vec![]),
        Ordering::Equal => QuadraticRoots::Roots(vec![QuadExt::from_rat(
            -b / (rat_int(2) * a),
        )]),
        Ordering::Greater => {
            // sqrt(p/q) = sqrt(p*q)/q
            let n = disc.numer() * disc.denom();
            let (s, m) = square_free_split(&n);
            let root_coeff = Rat::new(s, disc.denom().clone());
            let half = Rat::new(BigInt::one(), BigInt::from(2)) / a;
            let base = -b * &half;
            let spread = root_coeff * half;
            let mut roots = vec![
                QuadExt::new(base.clone(), spread.clone(), m.clone()),
                QuadExt::new(base, -spread, m),
            ];
            roots.sort();
            QuadraticRoots::Roots(roots)
        }
    }
}

/// A rational strictly between `lo` and `hi` (requires `lo < hi`).
///
/// Finite irrational endpoints are separated through dyadic interval
/// refinement, doubling precision until the bounds split.
pub fn rational_between(lo: &Ext, hi: &Ext) -> Rat {
    debug_assert!(lo < hi, "rational_between needs lo < hi");
    match (lo, hi) {
        (Ext::NegInf, Ext::PosInf) => Rat::zero(),
        (Ext::NegInf, Ext::Finite(x)) => {
            let (l, _) = x.dyadic_bounds(8);
            l.floor() - rat_int(1)
        }
        (Ext::Finite(x), Ext::PosInf) => {
            let (_, u) = x.dyadic_bounds(8);
            u.ceil() + rat_int(1)
        }
        (Ext::Finite(x), Ext::Finite(y)) => {
            if let (Some(xr), Some(yr)) = (x.as_rat(), y.as_rat()) {
                return (xr + yr) / rat_int(2);
            }
            let mut bits = 32;
            loop {
                let (_, xu) = x.dyadic_bounds(bits);
                let (yl, _) = y.dyadic_bounds(bits);
                if xu < yl {
                    return (xu + yl) / rat_int(2);
                }
                bits *= 2;
                assert!(bits <= 1 << 20, "rational_between failed to separate");
            }
        }
        _ => unreachable!("lo < hi violated"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qe(a: (i64, i64), b: (i64, i64), d: i64) -> QuadExt {
        QuadExt::new(rat(a.0, a.1), rat(b.0, b.1), BigInt::from(d))
    }

    #[test]
    fn cmp_identity() {
        let one = qe((1, 1), (0, 1), 0);
        assert_eq!(qe_cmp(&one, &one), Ordering::Equal);
    }

    #[test]
    fn cmp_sqrt2_vs_three_halves() {
        // Integer squaring oracle: (sqrt 2)^2 * 4 = 8 < 9 = (3/2)^2 * 4,
        // hence sqrt(2) < 3/2.
        assert!(2 * 4 < 9);
        let s2 = qe((0, 1), (1, 1), 2);
        let th = qe((3, 2), (0, 1), 0);
        assert_eq!(qe_cmp(&s2, &th), Ordering::Less);
    }

    #[test]
    fn cmp_same_radical() {
        let a = qe((0, 1), (2, 1), 2);
        let b = qe((0, 1), (1, 1), 2);
        assert_eq!(qe_cmp(&a, &b), Ordering::Greater);
    }

    #[test]
    fn cmp_across_radicals() {
        // 1 + sqrt(2) = 2.414... > sqrt(3) = 1.732...
        let x = qe((1, 1), (1, 1), 2);
        let y = qe((0, 1), (1, 1), 3);
        assert_eq!(qe_cmp(&x, &y), Ordering::Greater);
        // sqrt(2) + sqrt(3) > 3 > sqrt(2) + 1  =>  sqrt(3) vs 3 - sqrt(2)
        let u = qe((0, 1), (1, 1), 3);
        let v = qe((3, 1), (-1, 1), 2);
        assert_eq!(qe_cmp(&u, &v), Ordering::Greater); // 1.732 > 1.586
    }

    #[test]
    fn radicand_canonicalization() {
        // 1 + sqrt(8) == 1 + 2*sqrt(2), structurally after canonicalization.
        let x = qe((1, 1), (1, 1), 8);
        let y = qe((1, 1), (2, 1), 2);
        assert_eq!(x, y);
        // sqrt(9) folds to the rational 3.
        let z = qe((0, 1), (1, 1), 9);
        assert_eq!(z.as_rat(), Some(&rat_int(3)));
    }

    #[test]
    fn solve_examples() {
        let r = solve_quadratic(&rat_int(1), &rat_int(0), &rat_int(-2));
        let roots = r.roots();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], qe((0, 1), (-1, 1), 2));
        assert_eq!(roots[1], qe((0, 1), (1, 1), 2));

        let r = solve_quadratic(&rat_int(0), &rat_int(2), &rat_int(-4));
        assert_eq!(r.roots(), &[QuadExt::from_int(2)]);

        let r = solve_quadratic(&rat_int(1), &rat_int(0), &rat_int(1));
        assert!(r.roots().is_empty());

        let r = solve_quadratic(&rat_int(0), &rat_int(0), &rat_int(0));
        assert_eq!(r, QuadraticRoots::AllReals);
    }

    #[test]
    fn roots_satisfy_equation_symbolically() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = rat(rng.random_range(-20..=20), rng.random_range(1..=9));
            let b = rat(rng.random_range(-20..=20), rng.random_range(1..=9));
            let c = rat(rng.random_range(-20..=20), rng.random_range(1..=9));
            for root in solve_quadratic(&a, &b, &c).roots() {
                let val = root
                    .square()
                    .mul_rat(&a)
                    .try_add(&root.mul_rat(&b))
                    .unwrap()
                    .add_rat(&c);
                assert_eq!(val.sign(), Ordering::Equal, "a={a} b={b} c={c}");
            }
        }
    }

    #[test]
    fn mixed_radical_arithmetic_rejected() {
        let x = qe((0, 1), (1, 1), 2);
        let y = qe((0, 1), (1, 1), 3);
        assert!(matches!(
            x.try_add(&y),
            Err(AlgebraError::UnsupportedMixedRadicals { .. })
        ));
        assert!(x.try_mul(&y).is_err());
        // One rational operand is always fine.
        let r = QuadExt::from_int(5);
        assert!(x.try_add(&r).is_ok());
    }

    fn random_qe(rng: &mut ChaCha8Rng) -> QuadExt {
        let ds = [0i64, 2, 3, 5, 6, 7, 10, 11];
        qe(
            (rng.random_range(-40..=40), rng.random_range(1..=12)),
            (rng.random_range(-40..=40), rng.random_range(1..=12)),
            ds[rng.random_range(0..ds.len())],
        )
    }

    /// 256-bit dyadic interval oracle: returns an order whenever the
    /// intervals separate, which they do for all unequal values here.
    fn interval_oracle(x: &QuadExt, y: &QuadExt) -> Option<Ordering> {
        let (xl, xu) = x.dyadic_bounds(256);
        let (yl, yu) = y.dyadic_bounds(256);
        if xu < yl {
            Some(Ordering::Less)
        } else if yu < xl {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    #[test]
    fn trichotomy_against_interval_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut decided = 0;
        for _ in 0..10_000 {
            let x = random_qe(&mut rng);
            let y = random_qe(&mut rng);
            let ord = qe_cmp(&x, &y);
            assert_eq!(qe_cmp(&y, &x), ord.reverse());
            match interval_oracle(&x, &y) {
                Some(o) => {
                    decided += 1;
                    assert_eq!(ord, o, "x={x} y={y}");
                }
                None => assert_eq!(ord, Ordering::Equal, "x={x} y={y}"),
            }
        }
        assert!(decided > 9_000);
    }

    #[test]
    fn rational_between_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2_000 {
            let x = random_qe(&mut rng);
            let y = random_qe(&mut rng);
            let (lo, hi) = match qe_cmp(&x, &y) {
                Ordering::Less => (x, y),
                Ordering::Greater => (y, x),
                Ordering::Equal => continue,
            };
            let q = rational_between(&Ext::Finite(lo.clone()), &Ext::Finite(hi.clone()));
            let q = QuadExt::from_rat(q);
            assert_eq!(qe_cmp(&lo, &q), Ordering::Less);
            assert_eq!(qe_cmp(&q, &hi), Ordering::Less);
        }
        let v = qe((0, 1), (1, 1), 2);
        let below = rational_between(&Ext::NegInf, &Ext::Finite(v.clone()));
        assert_eq!(QuadExt::from_rat(below).cmp_exact(&v), Ordering::Less);
        let above = rational_between(&Ext::Finite(v.clone()), &Ext::PosInf);
        assert_eq!(QuadExt::from_rat(above).cmp_exact(&v), Ordering::Greater);
    }

    #[test]
    fn ext_ordering() {
        let f = Ext::Finite(QuadExt::from_int(100));
        assert!(Ext::NegInf < f);
        assert!(f < Ext::PosInf);
        assert!(Ext::NegInf < Ext::PosInf);
    }

    #[test]
    fn rat_string_round_trip() {
        assert_eq!(rat_to_string(&rat(-3, 6)), "-1/2");
        assert_eq!(rat_from_str("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(rat_from_str("7").unwrap(), rat_int(7));
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("x").is_err());
    }
}
