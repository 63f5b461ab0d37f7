//! Real algebraic numbers and exact arithmetic in `Z[beta]` / `Q(beta)`.
//!
//! An [`AlgebraicReal`] is an integer polynomial together with a rational
//! isolating interval containing exactly one of its real roots. Elements of
//! `Z[beta]` are integer coordinate vectors over the power basis
//! `1, beta, ..., beta^(d-1)`; closure of addition and multiplication needs a
//! monic defining polynomial (beta an algebraic integer). A rational-
//! coordinate variant covers general points of `[0, 1]` and rational beta.
//!
//! Sign decisions evaluate the coordinate polynomial over the isolating
//! interval and refine until the enclosure excludes zero. If the defining
//! polynomial is reducible, a nonzero coordinate vector can still represent
//! the real number zero; an exact gcd test detects that case, so comparisons
//! always terminate.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{self, IntPolynomial};
use crate::Result;

/// Interval-bisection state for one isolated real root.
///
/// When the square-free part changes sign across the interval, bisection
/// tracks endpoint signs; otherwise (even multiplicity) it falls back to
/// Sturm counts.
#[derive(Debug, Clone)]
struct Isolator {
    sf: IntPolynomial,
    lo: BigRational,
    hi: BigRational,
    sign_lo: i8,
    sign_hi: i8,
}

fn sign_of_rational(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Isolator {
    fn new(sf: IntPolynomial, lo: BigRational, hi: BigRational) -> Self {
        let sign_lo = sign_of_rational(&sf.eval_rational(&lo));
        let sign_hi = sign_of_rational(&sf.eval_rational(&hi));
        Isolator {
            sf,
            lo,
            hi,
            sign_lo,
            sign_hi,
        }
    }

    fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn bisect_once(&mut self) {
        if self.is_point() {
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        let s_mid = sign_of_rational(&self.sf.eval_rational(&mid));
        if s_mid == 0 {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        if self.sign_lo != 0 && self.sign_hi != 0 && self.sign_lo != self.sign_hi {
            if s_mid == self.sign_lo {
                self.lo = mid;
                self.sign_lo = s_mid;
            } else {
                self.hi = mid;
                self.sign_hi = s_mid;
            }
        } else {
            // even-multiplicity root: decide by Sturm count on the left half
            let left = self.sf.count_roots_between(&self.lo, &mid);
            if left == 1 {
                self.hi = mid;
                self.sign_hi = s_mid;
            } else {
                self.lo = mid;
                self.sign_lo = s_mid;
            }
        }
    }

    fn refine_below(&mut self, width: &BigRational) {
        while !self.is_point() && self.width() > *width {
            self.bisect_once();
        }
    }

    /// Position of the isolated root relative to a rational point.
    fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if self.is_point() {
            return self.lo.cmp(r);
        }
        // the root lies strictly inside (lo, hi)
        if *r <= self.lo {
            return Ordering::Greater;
        }
        if *r >= self.hi {
            return Ordering::Less;
        }
        let s_r = sign_of_rational(&self.sf.eval_rational(r));
        if s_r == 0 {
            return Ordering::Equal;
        }
        if self.sign_lo != 0 && self.sign_hi != 0 && self.sign_lo != self.sign_hi {
            if s_r == self.sign_lo {
                Ordering::Greater // root in (r, hi)
            } else {
                Ordering::Less
            }
        } else if self.sf.count_roots_between(&self.lo, r) == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// A real algebraic number: defining polynomial plus rational isolating interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicReal {
    poly: IntPolynomial,
    #[serde(
        serialize_with = "serialize_rational",
        deserialize_with = "deserialize_rational"
    )]
    lo: BigRational,
    #[serde(
        serialize_with = "serialize_rational",
        deserialize_with = "deserialize_rational"
    )]
    hi: BigRational,
}

fn serialize_rational<S: serde::Serializer>(
    x: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    poly::format_rational(x).serialize(s)
}

fn deserialize_rational<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    poly::parse_rational(&s).map_err(serde::de::Error::custom)
}

impl AlgebraicReal {
    /// Builds an algebraic real, verifying that `[lo, hi]` isolates exactly one
    /// real root of `poly` (Sturm count, so even-multiplicity roots are found).
    pub fn new(poly: IntPolynomial, lo: BigRational, hi: BigRational) -> Result<Self> {
        if poly.is_zero() || poly.degree() < 1 {
            return Err(Error::InvalidInput(
                "defining polynomial must have degree >= 1".into(),
            ));
        }
        if lo > hi {
            return Err(Error::InvalidInput("empty isolating interval".into()));
        }
        let sf = poly.square_free_part();
        if lo == hi {
            if !sf.eval_rational(&lo).is_zero() {
                return Err(Error::InvalidInput(
                    "point interval does not hit a root".into(),
                ));
            }
            return Ok(AlgebraicReal { poly, lo, hi });
        }
        // collapse an endpoint root to a point interval
        if sf.eval_rational(&lo).is_zero() {
            let hi = lo.clone();
            return Ok(AlgebraicReal { poly, lo, hi });
        }
        if sf.eval_rational(&hi).is_zero() {
            let lo = hi.clone();
            return Ok(AlgebraicReal { poly, lo, hi });
        }
        let count = poly.count_roots_between(&lo, &hi);
        if count != 1 {
            return Err(Error::InvalidInput(format!(
                "interval [{}, {}] contains {} roots of {}, expected exactly 1",
                poly::format_rational(&lo),
                poly::format_rational(&hi),
                count,
                poly
            )));
        }
        Ok(AlgebraicReal { poly, lo, hi })
    }

    /// A rational number as a degree-1 algebraic real.
    pub fn from_rational(r: BigRational) -> Self {
        AlgebraicReal {
            poly: IntPolynomial::linear_from_rational(&r),
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The golden mean, root of `z^2 - z - 1` in `(1, 2)`.
    pub fn golden() -> Self {
        AlgebraicReal::new(
            IntPolynomial::from_i64(&[-1, -1, 1]),
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
        )
        .expect("golden mean isolates")
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_rational_point(&self) -> bool {
        self.lo == self.hi
    }

    fn isolator(&self) -> Isolator {
        Isolator::new(
            self.poly.square_free_part(),
            self.lo.clone(),
            self.hi.clone(),
        )
    }

    /// Returns a refinement whose interval width is at most `target_width`.
    ///
    /// The root never leaves the returned interval and widths halve each step.
    pub fn refine(&self, target_width: &BigRational) -> Self {
        let mut iso = self.isolator();
        iso.refine_below(target_width);
        AlgebraicReal {
            poly: self.poly.clone(),
            lo: iso.lo,
            hi: iso.hi,
        }
    }

    /// Compares the represented real against a rational, exactly.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.isolator().cmp_rational(r)
    }

    /// Approximate value, refined to ~60 bits first.
    pub fn to_f64(&self) -> f64 {
        let width = BigRational::new(BigInt::one(), BigInt::from(2).pow(60));
        let refined = self.refine(&width);
        let mid = (&refined.lo + &refined.hi) / BigRational::from_integer(BigInt::from(2));
        poly::rational_to_f64(&mid)
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "root of {} in [{}, {}]",
            self.poly,
            poly::format_rational(&self.lo),
            poly::format_rational(&self.hi)
        )
    }
}

/// Shared defining data for one `beta`: the polynomial plus a refinable
/// isolating-interval cache. The cache only ever narrows, so sharing it
/// across threads keeps every operation deterministic.
pub struct BetaContext {
    beta: AlgebraicReal,
    monic: bool,
    iso: Mutex<Isolator>,
}

impl fmt::Debug for BetaContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BetaContext")
            .field("beta", &self.beta)
            .finish()
    }
}

impl BetaContext {
    pub fn new(beta: AlgebraicReal) -> Arc<Self> {
        let iso = Mutex::new(beta.isolator());
        let monic = beta.poly().is_monic();
        Arc::new(BetaContext { beta, monic, iso })
    }

    pub fn beta(&self) -> &AlgebraicReal {
        &self.beta
    }

    pub fn poly(&self) -> &IntPolynomial {
        self.beta.poly()
    }

    /// Dimension of the power basis.
    pub fn degree(&self) -> usize {
        self.beta.poly().degree()
    }

    /// Whether `Z[beta]` coordinate arithmetic is available.
    pub fn is_monic(&self) -> bool {
        self.monic
    }

    /// Cached interval, refined to width at most `2^-min_bits`.
    pub fn refined_interval(&self, min_bits: u32) -> (BigRational, BigRational) {
        let width = BigRational::new(BigInt::one(), BigInt::from(2).pow(min_bits));
        let mut iso = self.iso.lock().unwrap();
        iso.refine_below(&width);
        (iso.lo.clone(), iso.hi.clone())
    }

    fn bisect_once(&self) {
        self.iso.lock().unwrap().bisect_once();
    }

    fn current_interval(&self) -> (BigRational, BigRational) {
        let iso = self.iso.lock().unwrap();
        (iso.lo.clone(), iso.hi.clone())
    }

    pub fn beta_f64(&self) -> f64 {
        let (lo, hi) = self.refined_interval(60);
        poly::rational_to_f64(&((lo + hi) / BigRational::from_integer(BigInt::from(2))))
    }

    /// Two contexts are interchangeable when their defining data agree.
    pub fn same_as(&self, other: &BetaContext) -> bool {
        std::ptr::eq(self, other) || self.beta.poly() == other.beta.poly()
    }
}

/// Decides the sign of `g(beta)` for an integer polynomial `g`. Refines the
/// cached interval; after 96 bisections runs the exact gcd zero test once and
/// either returns 0 or keeps refining with termination guaranteed.
fn sign_at_beta(g: &IntPolynomial, ctx: &BetaContext) -> i8 {
    if g.is_zero() {
        return 0;
    }
    let mut rounds = 0u32;
    loop {
        let (lo, hi) = ctx.current_interval();
        if lo == hi {
            return sign_of_rational(&g.eval_rational(&lo));
        }
        let (elo, ehi) = g.eval_interval(&lo, &hi);
        if elo.is_positive() {
            return 1;
        }
        if ehi.is_negative() {
            return -1;
        }
        if rounds == 96 {
            // exact zero test: g(beta) = 0 iff gcd(g, defining) has a root here
            let gq = poly::rat::from_int(g);
            let fq = poly::rat::from_int(ctx.poly());
            let gcd = poly::rat::gcd(&gq, &fq);
            if gcd.len() > 1 {
                let gcd_int = poly::rat::to_primitive_int(&gcd);
                let root_at_lo = gcd_int.eval_rational(&lo).is_zero();
                let root_at_hi = gcd_int.eval_rational(&hi).is_zero();
                if root_at_lo || root_at_hi {
                    // beta is interior, so an endpoint root is not beta; shrink past it
                    ctx.bisect_once();
                } else if gcd_int.count_roots_between(&lo, &hi) > 0 {
                    return 0;
                }
            }
        }
        ctx.bisect_once();
        rounds += 1;
    }
}

/// An exact element of `Z[beta]`: integer coordinates over the power basis.
///
/// Structural equality (`==`) is coordinate equality, which coincides with
/// equality of the represented reals whenever the defining polynomial is the
/// minimal polynomial of `beta`. [`ZBetaElement::compare`] orders by real value.
#[derive(Debug, Clone)]
pub struct ZBetaElement {
    coords: Vec<BigInt>,
    ctx: Arc<BetaContext>,
}

impl PartialEq for ZBetaElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.coords == other.coords
    }
}

impl Eq for ZBetaElement {}

impl std::hash::Hash for ZBetaElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

fn assert_same_ctx(a: &BetaContext, b: &BetaContext) {
    assert!(
        a.same_as(b),
        "elements of Z[beta] for different beta cannot be combined"
    );
}

impl ZBetaElement {
    pub fn new(coords: Vec<BigInt>, ctx: &Arc<BetaContext>) -> Self {
        assert!(
            ctx.is_monic(),
            "Z[beta] coordinates need a monic defining polynomial"
        );
        assert_eq!(coords.len(), ctx.degree(), "coordinate length mismatch");
        ZBetaElement {
            coords,
            ctx: Arc::clone(ctx),
        }
    }

    pub fn zero(ctx: &Arc<BetaContext>) -> Self {
        Self::new(vec![BigInt::zero(); ctx.degree()], ctx)
    }

    pub fn from_integer(n: i64, ctx: &Arc<BetaContext>) -> Self {
        let mut coords = vec![BigInt::zero(); ctx.degree()];
        coords[0] = BigInt::from(n);
        Self::new(coords, ctx)
    }

    pub fn one(ctx: &Arc<BetaContext>) -> Self {
        Self::from_integer(1, ctx)
    }

    /// The generator `beta` itself.
    pub fn beta(ctx: &Arc<BetaContext>) -> Self {
        let d = ctx.degree();
        if d == 1 {
            // monic degree 1: beta is the integer -f(0)
            let n = -ctx.poly().coeffs()[0].clone();
            return Self::new(vec![n], ctx);
        }
        let mut coords = vec![BigInt::zero(); d];
        coords[1] = BigInt::one();
        Self::new(coords, ctx)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn context(&self) -> &Arc<BetaContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_same_ctx(&self.ctx, &other.ctx);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        ZBetaElement {
            coords,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_same_ctx(&self.ctx, &other.ctx);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        ZBetaElement {
            coords,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn neg(&self) -> Self {
        ZBetaElement {
            coords: self.coords.iter().map(|c| -c).collect(),
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn add_integer(&self, n: i64) -> Self {
        let mut coords = self.coords.clone();
        coords[0] += BigInt::from(n);
        ZBetaElement {
            coords,
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn mul_integer(&self, n: i64) -> Self {
        let n = BigInt::from(n);
        ZBetaElement {
            coords: self.coords.iter().map(|c| c * &n).collect(),
            ctx: Arc::clone(&self.ctx),
        }
    }

    /// Multiplication by `beta`: shift coordinates and reduce the single
    /// overflow term with the monic defining relation.
    pub fn mul_beta(&self) -> Self {
        let d = self.ctx.degree();
        if d == 1 {
            return self.mul(&Self::beta(&self.ctx));
        }
        let f = self.ctx.poly().coeffs();
        let mut coords = vec![BigInt::zero(); d];
        coords[1..d].clone_from_slice(&self.coords[..(d - 1)]);
        let top = &self.coords[d - 1];
        if !top.is_zero() {
            // beta^d = -(f[0] + f[1] beta + ... + f[d-1] beta^(d-1))
            for (i, c) in coords.iter_mut().enumerate() {
                *c -= top * &f[i];
            }
        }
        ZBetaElement {
            coords,
            ctx: Arc::clone(&self.ctx),
        }
    }

    /// Full product, reduced by the defining relation.
    pub fn mul(&self, other: &Self) -> Self {
        assert_same_ctx(&self.ctx, &other.ctx);
        let d = self.ctx.degree();
        let f = self.ctx.poly().coeffs();
        let mut raw = vec![BigInt::zero(); 2 * d.max(1) - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        // reduce from the top: beta^k = -sum f[i] beta^(k-d+i)
        for k in (d..raw.len()).rev() {
            let top = std::mem::replace(&mut raw[k], BigInt::zero());
            if top.is_zero() {
                continue;
            }
            for i in 0..d {
                raw[k - d + i] -= &top * &f[i];
            }
        }
        raw.truncate(d);
        ZBetaElement {
            coords: raw,
            ctx: Arc::clone(&self.ctx),
        }
    }

    fn coord_poly(&self) -> IntPolynomial {
        IntPolynomial::new(self.coords.clone())
    }

    /// Sign of the represented real number.
    pub fn sign(&self) -> i8 {
        sign_at_beta(&self.coord_poly(), &self.ctx)
    }

    /// Total order by real value. `Equal` means equal as real numbers; with a
    /// minimal defining polynomial that is the same as coordinate equality.
    pub fn compare(&self, other: &Self) -> Ordering {
        assert_same_ctx(&self.ctx, &other.ctx);
        if self.coords == other.coords {
            return Ordering::Equal;
        }
        match self.sub(other).sign() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    /// Approximate value at a 64-bit refinement of beta's interval.
    pub fn to_f64(&self) -> f64 {
        let g = self.coord_poly();
        if g.is_zero() {
            return 0.0;
        }
        let (lo, hi) = self.ctx.refined_interval(64);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        poly::rational_to_f64(&g.eval_rational(&mid))
    }

    /// Exact enclosure of the value over a refined interval of `beta`.
    pub fn enclosure(&self, min_bits: u32) -> (BigRational, BigRational) {
        let g = self.coord_poly();
        let (lo, hi) = self.ctx.refined_interval(min_bits);
        g.eval_interval(&lo, &hi)
    }
}

fn format_coords(coords: &[BigInt]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = match i {
            0 => c.to_string(),
            1 if c.is_one() => "b".to_string(),
            1 if (-c).is_one() => "-b".to_string(),
            1 => format!("{c}*b"),
            _ if c.is_one() => format!("b^{i}"),
            _ if (-c).is_one() => format!("-b^{i}"),
            _ => format!("{c}*b^{i}"),
        };
        if parts.is_empty() {
            parts.push(term);
        } else if let Some(rest) = term.strip_prefix('-') {
            parts.push(format!("- {rest}"));
        } else {
            parts.push(format!("+ {term}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

impl fmt::Display for ZBetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_coords(&self.coords))
    }
}

/// An element of `Q(beta)`: a `Z[beta]`-style numerator over a positive
/// integer denominator. Handles general points of `[0, 1]` and rational beta.
#[derive(Debug, Clone)]
pub struct QBetaElement {
    num: Vec<BigInt>,
    den: BigInt,
    ctx: Arc<BetaContext>,
}

impl PartialEq for QBetaElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.num == other.num && self.den == other.den
    }
}

impl Eq for QBetaElement {}

impl std::hash::Hash for QBetaElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl QBetaElement {
    fn normalized(mut num: Vec<BigInt>, mut den: BigInt, ctx: Arc<BetaContext>) -> Self {
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut g = den.clone();
        for c in &num {
            g = num_integer::gcd(g, c.clone());
            if g.is_one() {
                break;
            }
        }
        if !g.is_one() {
            den /= &g;
            for c in num.iter_mut() {
                *c = c.clone() / &g;
            }
        }
        QBetaElement { num, den, ctx }
    }

    pub fn new(num: Vec<BigInt>, den: BigInt, ctx: &Arc<BetaContext>) -> Self {
        assert_eq!(num.len(), ctx.degree());
        Self::normalized(num, den, Arc::clone(ctx))
    }

    pub fn zero(ctx: &Arc<BetaContext>) -> Self {
        QBetaElement {
            num: vec![BigInt::zero(); ctx.degree()],
            den: BigInt::one(),
            ctx: Arc::clone(ctx),
        }
    }

    pub fn one(ctx: &Arc<BetaContext>) -> Self {
        Self::from_rational(&BigRational::one(), ctx)
    }

    pub fn from_rational(r: &BigRational, ctx: &Arc<BetaContext>) -> Self {
        let mut num = vec![BigInt::zero(); ctx.degree()];
        num[0] = r.numer().clone();
        Self::normalized(num, r.denom().clone(), Arc::clone(ctx))
    }

    pub fn from_zbeta(x: &ZBetaElement) -> Self {
        QBetaElement {
            num: x.coords().to_vec(),
            den: BigInt::one(),
            ctx: Arc::clone(x.context()),
        }
    }

    /// The generator `beta`.
    pub fn beta(ctx: &Arc<BetaContext>) -> Self {
        let d = ctx.degree();
        if d == 1 {
            // degree-1 defining polynomial q z - p (possibly non-monic)
            let f = ctx.poly().coeffs();
            let p = -f[0].clone();
            let q = f[1].clone();
            return Self::normalized(vec![p], q, Arc::clone(ctx));
        }
        let mut num = vec![BigInt::zero(); d];
        num[1] = BigInt::one();
        QBetaElement {
            num,
            den: BigInt::one(),
            ctx: Arc::clone(ctx),
        }
    }

    pub fn context(&self) -> &Arc<BetaContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// Integer coordinates, when the denominator is 1 and the context is monic.
    pub fn to_zbeta(&self) -> Option<ZBetaElement> {
        if self.den.is_one() && self.ctx.is_monic() {
            Some(ZBetaElement::new(self.num.clone(), &self.ctx))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_same_ctx(&self.ctx, &other.ctx);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Self::normalized(num, &self.den * &other.den, Arc::clone(&self.ctx))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QBetaElement {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
            ctx: Arc::clone(&self.ctx),
        }
    }

    pub fn add_integer(&self, n: i64) -> Self {
        self.add(&Self::from_rational(
            &BigRational::from_integer(BigInt::from(n)),
            &self.ctx,
        ))
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(num, &self.den * r.denom(), Arc::clone(&self.ctx))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_same_ctx(&self.ctx, &other.ctx);
        let d = self.ctx.degree();
        if d == 1 {
            // scalars; the degree-1 relation only enters through beta() itself
            let num = vec![&self.num[0] * &other.num[0]];
            return Self::normalized(num, &self.den * &other.den, Arc::clone(&self.ctx));
        }
        let f = self.ctx.poly().coeffs();
        let mut raw = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        for k in (d..raw.len()).rev() {
            let top = std::mem::replace(&mut raw[k], BigInt::zero());
            if top.is_zero() {
                continue;
            }
            for i in 0..d {
                raw[k - d + i] -= &top * &f[i];
            }
        }
        raw.truncate(d);
        Self::normalized(raw, &self.den * &other.den, Arc::clone(&self.ctx))
    }

    /// Multiplication by `beta`.
    pub fn mul_beta(&self) -> Self {
        self.mul(&Self::beta(&self.ctx))
    }

    /// Multiplicative inverse modulo the defining polynomial, via the
    /// extended Euclidean algorithm over `Q[x]`. Fails when the coordinate
    /// polynomial shares a factor with a reducible defining polynomial.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let d = self.ctx.degree();
        if d == 1 {
            return Ok(Self::normalized(
                vec![self.den.clone()],
                self.num[0].clone(),
                Arc::clone(&self.ctx),
            ));
        }
        use poly::rat;
        let f = rat::from_int(self.ctx.poly());
        let g: Vec<BigRational> = self
            .num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect();
        // extended euclid tracking only the g-cofactor: r_i = s_i * g (mod f)
        let (mut r0, mut r1) = (f.clone(), g.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        rat::trim(&mut r1);
        while r1.len() > 1 {
            let (q, r2) = rat::div_rem(&r0, &r1);
            let mut qs1 = vec![BigRational::zero(); q.len() + s1.len()];
            for (i, a) in q.iter().enumerate() {
                for (j, b) in s1.iter().enumerate() {
                    let t = a * b;
                    qs1[i + j] += t;
                }
            }
            let n = s0.len().max(qs1.len());
            let mut s2 = vec![BigRational::zero(); n];
            for (i, c) in s0.iter().enumerate() {
                s2[i] += c;
            }
            for (i, c) in qs1.iter().enumerate() {
                s2[i] -= c;
            }
            rat::trim(&mut s2);
            r0 = r1;
            r1 = r2;
            rat::trim(&mut r1);
            s0 = s1;
            s1 = s2;
        }
        if r1.is_empty() {
            return Err(Error::InvalidInput(
                "element shares a factor with the defining polynomial; not invertible".into(),
            ));
        }
        // r1 is a nonzero constant c: inverse = s1 / c
        let c = r1[0].clone();
        let mut inv_coeffs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        inv_coeffs.resize(d, BigRational::zero());
        let mut den = BigInt::one();
        for c in &inv_coeffs {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let num = inv_coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::normalized(num, den, Arc::clone(&self.ctx)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Sign of the represented real number.
    pub fn sign(&self) -> i8 {
        // denominator is positive, so the numerator decides
        sign_at_beta(&IntPolynomial::new(self.num.clone()), &self.ctx)
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        assert_same_ctx(&self.ctx, &other.ctx);
        if self.num == other.num && self.den == other.den {
            return Ordering::Equal;
        }
        match self.sub(other).sign() {
            0 => Ordering::Equal,
            s if s > 0 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.compare(&Self::from_rational(r, &self.ctx))
    }

    /// Exact rational value, defined when beta-coordinates above degree 0 vanish.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        let g = IntPolynomial::new(self.num.clone());
        if g.is_zero() {
            return 0.0;
        }
        let (lo, hi) = self.ctx.refined_interval(64);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        let v = g.eval_rational(&mid) / BigRational::from_integer(self.den.clone());
        poly::rational_to_f64(&v)
    }
}

impl fmt::Display for QBetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", format_coords(&self.num))
        } else {
            write!(f, "({})/{}", format_coords(&self.num), self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn refine_sqrt2_to_twenty_bits() {
        // bisection oracle: the interval must keep the sign change and contain sqrt(2)
        let x =
            AlgebraicReal::new(IntPolynomial::from_i64(&[-2, 0, 1]), rat(1, 1), rat(2, 1)).unwrap();
        let width = BigRational::new(BigInt::one(), BigInt::from(1 << 20));
        let r = x.refine(&width);
        assert!(r.width() <= width);
        let sqrt2 = 2f64.sqrt();
        assert!(poly::rational_to_f64(r.lo()) <= sqrt2 && sqrt2 <= poly::rational_to_f64(r.hi()));
        assert!(x.poly().eval_rational(r.lo()).is_negative());
        assert!(x.poly().eval_rational(r.hi()).is_positive());
    }

    #[test]
    fn refine_rational_root_collapses() {
        let x =
            AlgebraicReal::new(IntPolynomial::from_i64(&[-3, 1]), rat(2, 1), rat(4, 1)).unwrap();
        let r = x.refine(&rat(1, 1));
        assert!(r.width() <= rat(1, 1));
        assert_eq!(r.cmp_rational(&rat(3, 1)), Ordering::Equal);
    }

    #[test]
    fn refine_golden_to_micro() {
        // quadratic formula oracle
        let x = AlgebraicReal::golden();
        let width = rat(1, 1_000_000);
        let r = x.refine(&width);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(r.width() <= width);
        assert!(poly::rational_to_f64(r.lo()) <= phi && phi <= poly::rational_to_f64(r.hi()));
    }

    #[test]
    fn construction_rejects_multi_root_intervals() {
        let p = IntPolynomial::from_i64(&[-1, 1]).mul(&IntPolynomial::from_i64(&[-2, 1]));
        assert!(AlgebraicReal::new(p, rat(0, 1), rat(3, 1)).is_err());
    }

    #[test]
    fn construction_accepts_even_multiplicity_roots() {
        // (z-1)^2 has no sign change but exactly one distinct root in (0, 2)
        let sq = IntPolynomial::from_i64(&[-1, 1]);
        let p = sq.mul(&sq);
        let x = AlgebraicReal::new(p, rat(0, 1), rat(2, 1)).unwrap();
        let r = x.refine(&rat(1, 1024));
        assert_eq!(r.cmp_rational(&rat(1, 1)), Ordering::Equal);
    }

    fn golden_ctx() -> Arc<BetaContext> {
        BetaContext::new(AlgebraicReal::golden())
    }

    #[test]
    fn golden_defining_relation() {
        let ctx = golden_ctx();
        let b = ZBetaElement::beta(&ctx);
        let b2 = b.mul(&b);
        let b_plus_1 = b.add_integer(1);
        assert_eq!(b2.compare(&b_plus_1), Ordering::Equal);
        assert_eq!(b2, b_plus_1); // identical coordinates
    }

    #[test]
    fn golden_beta_exceeds_one() {
        let ctx = golden_ctx();
        let b = ZBetaElement::beta(&ctx);
        let one = ZBetaElement::one(&ctx);
        assert_eq!(b.compare(&one), Ordering::Greater);
    }

    #[test]
    fn cubic_compare_via_interval_oracle() {
        // beta is the root of z^3 - 3z^2 - z + 1 in (3, 4); beta ~ 3.2143,
        // so beta^2 ~ 10.33 sits below 3 beta + 1 ~ 10.64
        let p = IntPolynomial::from_i64(&[1, -1, -3, 1]);
        let beta = AlgebraicReal::new(p, rat(3, 1), rat(4, 1)).unwrap();
        let numeric = beta.to_f64();
        let ctx = BetaContext::new(beta);
        let b = ZBetaElement::beta(&ctx);
        let lhs = b.mul(&b);
        let rhs = b.mul_integer(3).add_integer(1);
        let expected = if numeric * numeric > 3.0 * numeric + 1.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        assert_eq!(lhs.compare(&rhs), expected);
        assert_eq!(lhs.compare(&rhs), Ordering::Less);
    }

    #[test]
    fn compare_consistent_with_numeric_evaluation() {
        let ctx = golden_ctx();
        let samples = [
            ZBetaElement::from_integer(0, &ctx),
            ZBetaElement::one(&ctx),
            ZBetaElement::beta(&ctx),
            ZBetaElement::beta(&ctx)
                .mul_beta()
                .sub(&ZBetaElement::from_integer(2, &ctx)),
            ZBetaElement::beta(&ctx).neg(),
            ZBetaElement::new(vec![BigInt::from(-1), BigInt::from(1)], &ctx), // beta - 1
        ];
        for a in &samples {
            for b in &samples {
                let ord = a.compare(b);
                let fa = a.to_f64();
                let fb = b.to_f64();
                if (fa - fb).abs() > 1e-9 {
                    assert_eq!(ord, fa.partial_cmp(&fb).unwrap(), "{fa} vs {fb}");
                }
            }
        }
    }

    #[test]
    fn product_and_sum_evaluate_consistently() {
        let ctx = golden_ctx();
        let a = ZBetaElement::beta(&ctx).mul_integer(2).add_integer(-1);
        let b = ZBetaElement::beta(&ctx).add_integer(3);
        let sum = a.add(&b);
        let prod = a.mul(&b);
        assert!((sum.to_f64() - (a.to_f64() + b.to_f64())).abs() < 1e-9);
        assert!((prod.to_f64() - (a.to_f64() * b.to_f64())).abs() < 1e-9);
    }

    #[test]
    fn reducible_context_detects_hidden_zero() {
        // defining polynomial (z^2 - z - 1)(z - 3), beta = golden root in (1, 2):
        // the element beta^2 - beta - 1 has nonzero coordinates but value zero
        let p = IntPolynomial::from_i64(&[-1, -1, 1]).mul(&IntPolynomial::from_i64(&[-3, 1]));
        let beta = AlgebraicReal::new(p, rat(1, 1), rat(2, 1)).unwrap();
        let ctx = BetaContext::new(beta);
        let b = ZBetaElement::beta(&ctx);
        let e = b.mul(&b).sub(&b).add_integer(-1);
        assert!(!e.is_zero()); // nonzero coordinates
        assert_eq!(e.sign(), 0); // but the real number is zero
    }

    #[test]
    fn qbeta_rational_context() {
        // rational beta = 3/2 as a degree-1 context
        let beta = AlgebraicReal::from_rational(rat(3, 2));
        let ctx = BetaContext::new(beta);
        let b = QBetaElement::beta(&ctx);
        assert_eq!(b.as_rational().unwrap(), rat(3, 2));
        let x = QBetaElement::from_rational(&rat(3, 10), &ctx);
        let bx = b.mul(&x);
        assert_eq!(bx.as_rational().unwrap(), rat(9, 20));
        assert_eq!(bx.cmp_rational(&rat(1, 2)), Ordering::Less);
    }

    #[test]
    fn qbeta_inverse_golden() {
        let ctx = golden_ctx();
        let b = QBetaElement::beta(&ctx);
        let inv = b.inv().unwrap();
        let prod = b.mul(&inv);
        assert_eq!(prod.compare(&QBetaElement::one(&ctx)), Ordering::Equal);
        // 1/golden = golden - 1
        let gm1 = b.sub(&QBetaElement::one(&ctx));
        assert_eq!(inv, gm1);
    }

    #[test]
    #[should_panic(expected = "different beta")]
    fn cross_beta_arithmetic_rejected() {
        let a = ZBetaElement::one(&golden_ctx());
        let sqrt2 =
            AlgebraicReal::new(IntPolynomial::from_i64(&[-2, 0, 1]), rat(1, 1), rat(2, 1)).unwrap();
        let b = ZBetaElement::one(&BetaContext::new(sqrt2));
        let _ = a.add(&b);
    }

    #[test]
    fn algebraic_real_json_round_trip() {
        let x = AlgebraicReal::new(
            IntPolynomial::from_i64(&[-1, -1, 1]),
            rat(3, 2),
            rat(2, 1),
        )
        .unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"poly":["-1","-1","1"],"lo":"3/2","hi":"2"}"#);
        let y: AlgebraicReal = serde_json::from_str(&json).unwrap();
        assert_eq!(x, y);
    }
}
