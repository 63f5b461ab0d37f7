//! The generalized beta-transformation and its symbolic dynamics.
//!
//! For `beta` in `(m, m+1]` and a sign configuration `E` in `{1,-1}^(m+1)`,
//! the map acts on `[0, 1]` by `f(x) = beta x - k` on `I_k` when `E(k) = 1`
//! and `f(x) = -beta x + k + 1` when `E(k) = -1`, where
//! `I_0 = [0, 1/beta]`, `I_k = (k/beta, (k+1)/beta]`, `I_m = (m/beta, 1]`.
//! Intervals are right-closed, and membership at a boundary `k/beta` is
//! decided exactly (`beta x - k` is the zero element), never numerically.
//!
//! Iterating from `x` produces the signed digit expansion
//! `x = sum_j s(x,j) d(x,j) / beta^j` with cumulative signs
//! `s(x,1) = 1`, `s(x,j+1) = e(x,j) s(x,j)`. Orbits are computed exactly in
//! `Q(beta)`, so expansions are detected as finite, periodic, or preperiodic
//! by exact repetition, and the map is post-critically finite exactly when
//! the orbit of 1 is finite.

use std::collections::HashMap;
use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebraic::{AlgebraicReal, BetaContext, QBetaElement, ZBetaElement};
use crate::error::Error;
use crate::Result;

/// The configuration of increasing (+1) and decreasing (-1) branches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignConfiguration {
    entries: Vec<i8>,
}

impl SignConfiguration {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("sign configuration is empty".into()));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidInput(
                "sign configuration entries must be +1 or -1".into(),
            ));
        }
        Ok(SignConfiguration { entries })
    }

    pub fn classical(m: u32) -> Self {
        SignConfiguration {
            entries: vec![1; m as usize + 1],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: u32) -> i8 {
        self.entries[k as usize]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn is_classical(&self) -> bool {
        self.entries.iter().all(|&e| e == 1)
    }

    /// Product of `E` over the symbols of a word.
    pub fn sign_of_word(&self, word: &[u32]) -> Result<i8> {
        let mut sign = 1i8;
        for &w in word {
            if w as usize >= self.entries.len() {
                return Err(Error::InvalidSymbol {
                    symbol: w,
                    m: self.entries.len() as u32 - 1,
                });
            }
            sign *= self.entries[w as usize];
        }
        Ok(sign)
    }
}

impl TryFrom<Vec<i8>> for SignConfiguration {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignConfiguration::new(v)
    }
}

impl From<SignConfiguration> for Vec<i8> {
    fn from(s: SignConfiguration) -> Vec<i8> {
        s.entries
    }
}

/// One step of an expansion: cumulative sign `s(j)` and digit `d(j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpansionStep {
    pub s: i8,
    pub d: u32,
}

/// How an expansion terminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// The orbit hit 0 exactly; the recorded steps are the whole expansion.
    Finite,
    /// Pairs repeat with (lowest) period `p` from the start.
    Periodic(usize),
    /// `k` preperiodic pairs followed by a period-`p` cycle, both minimal.
    Preperiodic(usize, usize),
    /// No repetition found within the step budget.
    Truncated(usize),
}

/// A `(beta, E)`-expansion: the sequence of `(s(j), d(j))` pairs.
///
/// For periodic and preperiodic shapes, `steps` holds exactly the preperiod
/// followed by one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    steps: Vec<ExpansionStep>,
    shape: Shape,
}

impl Expansion {
    pub fn new(steps: Vec<ExpansionStep>, shape: Shape) -> Result<Self> {
        let expect = match shape {
            Shape::Finite => steps.len(),
            Shape::Periodic(p) => p,
            Shape::Preperiodic(k, p) => k + p,
            Shape::Truncated(n) => n,
        };
        if steps.len() != expect {
            return Err(Error::InvalidInput(format!(
                "expansion has {} steps but shape {:?} expects {}",
                steps.len(),
                shape,
                expect
            )));
        }
        if matches!(shape, Shape::Finite) {
            if let Some(last) = steps.last() {
                if last.d == 0 {
                    return Err(Error::InvalidInput(
                        "finite expansion must end in a nonzero digit".into(),
                    ));
                }
            }
        }
        if let Some(first) = steps.first() {
            if first.s != 1 {
                return Err(Error::InvalidInput("expansions start with s(1) = 1".into()));
            }
        }
        Ok(Expansion { steps, shape })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn steps(&self) -> &[ExpansionStep] {
        &self.steps
    }

    pub fn preperiod(&self) -> usize {
        match self.shape {
            Shape::Preperiodic(k, _) => k,
            _ => 0,
        }
    }

    pub fn period(&self) -> Option<usize> {
        match self.shape {
            Shape::Periodic(p) | Shape::Preperiodic(_, p) => Some(p),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.shape, Shape::Periodic(_) | Shape::Preperiodic(_, _))
    }

    pub fn digits(&self) -> Vec<u32> {
        self.steps.iter().map(|s| s.d).collect()
    }

    /// First `n` pairs, unrolling the periodic tail; finite expansions are
    /// padded with zero digits (their sign no longer matters).
    pub fn unroll_pairs(&self, n: usize) -> Vec<ExpansionStep> {
        let mut out = Vec::with_capacity(n);
        match self.shape {
            Shape::Finite | Shape::Truncated(_) => {
                for j in 0..n {
                    if j < self.steps.len() {
                        out.push(self.steps[j]);
                    } else {
                        out.push(ExpansionStep { s: 1, d: 0 });
                    }
                }
            }
            Shape::Periodic(p) => {
                for j in 0..n {
                    out.push(self.steps[j % p]);
                }
            }
            Shape::Preperiodic(k, p) => {
                for j in 0..n {
                    if j < k {
                        out.push(self.steps[j]);
                    } else {
                        out.push(self.steps[k + (j - k) % p]);
                    }
                }
            }
        }
        out
    }

    /// First `n` signed digit products `s(j) d(j)`.
    pub fn unroll_products(&self, n: usize) -> Vec<i64> {
        self.unroll_pairs(n)
            .iter()
            .map(|st| st.s as i64 * st.d as i64)
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ExpansionRepr {
    shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preperiod: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
    steps: Vec<ExpansionStep>,
}

impl Serialize for Expansion {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let (shape, preperiod, period) = match self.shape {
            Shape::Finite => ("finite", None, None),
            Shape::Periodic(p) => ("periodic", Some(0), Some(p)),
            Shape::Preperiodic(k, p) => ("preperiodic", Some(k), Some(p)),
            Shape::Truncated(_) => ("truncated", None, None),
        };
        ExpansionRepr {
            shape: shape.to_string(),
            preperiod,
            period,
            steps: self.steps.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Expansion {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = ExpansionRepr::deserialize(de)?;
        let shape = match repr.shape.as_str() {
            "finite" => Shape::Finite,
            "periodic" => Shape::Periodic(
                repr.period
                    .ok_or_else(|| serde::de::Error::custom("periodic shape needs period"))?,
            ),
            "preperiodic" => Shape::Preperiodic(
                repr.preperiod
                    .ok_or_else(|| serde::de::Error::custom("preperiodic shape needs preperiod"))?,
                repr.period
                    .ok_or_else(|| serde::de::Error::custom("preperiodic shape needs period"))?,
            ),
            "truncated" => Shape::Truncated(repr.steps.len()),
            other => {
                return Err(serde::de::Error::custom(format!("unknown shape '{other}'")));
            }
        };
        Expansion::new(repr.steps, shape).map_err(serde::de::Error::custom)
    }
}

/// An itinerary: the symbol sequence of an orbit over `{0, ..., m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    symbols: Vec<u32>,
    shape: Shape,
}

impl Itinerary {
    pub fn new(symbols: Vec<u32>, shape: Shape) -> Self {
        Itinerary { symbols, shape }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// First `n` symbols, unrolling the periodic tail; truncated itineraries
    /// yield at most their recorded length.
    pub fn unroll(&self, n: usize) -> Vec<u32> {
        match self.shape {
            Shape::Finite | Shape::Truncated(_) => {
                self.symbols.iter().copied().take(n).collect()
            }
            Shape::Periodic(p) => (0..n).map(|j| self.symbols[j % p]).collect(),
            Shape::Preperiodic(k, p) => (0..n)
                .map(|j| {
                    if j < k {
                        self.symbols[j]
                    } else {
                        self.symbols[k + (j - k) % p]
                    }
                })
                .collect(),
        }
    }

    /// Number of distinct shift positions worth checking.
    fn body_len(&self) -> usize {
        self.symbols.len()
    }
}

#[derive(Serialize, Deserialize)]
struct ItineraryRepr {
    symbols: Vec<u32>,
    shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preperiod: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
}

impl Serialize for Itinerary {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let (shape, preperiod, period) = match self.shape {
            Shape::Finite => ("finite", None, None),
            Shape::Periodic(p) => ("periodic", Some(0), Some(p)),
            Shape::Preperiodic(k, p) => ("preperiodic", Some(k), Some(p)),
            Shape::Truncated(_) => ("truncated", None, None),
        };
        ItineraryRepr {
            symbols: self.symbols.clone(),
            shape: shape.to_string(),
            preperiod,
            period,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Itinerary {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = ItineraryRepr::deserialize(de)?;
        let shape = match repr.shape.as_str() {
            "finite" => Shape::Finite,
            "periodic" => Shape::Periodic(
                repr.period
                    .ok_or_else(|| serde::de::Error::custom("periodic shape needs period"))?,
            ),
            "preperiodic" => Shape::Preperiodic(
                repr.preperiod.unwrap_or(0),
                repr.period
                    .ok_or_else(|| serde::de::Error::custom("preperiodic shape needs period"))?,
            ),
            "truncated" => Shape::Truncated(repr.symbols.len()),
            other => {
                return Err(serde::de::Error::custom(format!("unknown shape '{other}'")));
            }
        };
        Ok(Itinerary::new(repr.symbols, shape))
    }
}

/// Outcome of post-critically-finite detection.
#[derive(Debug, Clone)]
pub enum PcfOutcome {
    Pcf(PcfData),
    Undetermined,
}

/// Witness data for a PCF map: minimal `(preperiod, period)` of the infinite
/// expansion of 1, the finite orbit of 1, and the expansion itself.
#[derive(Debug, Clone)]
pub struct PcfData {
    pub preperiod: usize,
    pub period: usize,
    pub orbit: Vec<ZBetaElement>,
    pub expansion: Expansion,
}

/// The `(beta, E)`-transformation.
#[derive(Debug, Clone)]
pub struct GBetaMap {
    ctx: Arc<BetaContext>,
    m: u32,
    signs: SignConfiguration,
}

impl GBetaMap {
    /// Builds the map, verifying `m < beta <= m + 1` where `m + 1` is the
    /// number of sign entries. Both inequalities are decided exactly.
    pub fn new(beta: AlgebraicReal, signs: SignConfiguration) -> Result<Self> {
        if signs.len() < 2 {
            return Err(Error::InvalidInput(
                "sign configuration needs at least two branches (beta > 1)".into(),
            ));
        }
        let m = (signs.len() - 1) as u32;
        let m_rat = BigRational::from_integer(m.into());
        let m1_rat = BigRational::from_integer((m + 1).into());
        if beta.cmp_rational(&m_rat) != Ordering::Greater {
            return Err(Error::InvalidInput(format!(
                "beta must exceed m = {m} for {} branches",
                m + 1
            )));
        }
        if beta.cmp_rational(&m1_rat) == Ordering::Greater {
            return Err(Error::InvalidInput(format!(
                "beta must be at most m + 1 = {}",
                m + 1
            )));
        }
        let ctx = BetaContext::new(beta);
        Ok(GBetaMap { ctx, m, signs })
    }

    pub fn context(&self) -> &Arc<BetaContext> {
        &self.ctx
    }

    pub fn beta(&self) -> &AlgebraicReal {
        self.ctx.beta()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn signs(&self) -> &SignConfiguration {
        &self.signs
    }

    pub fn one(&self) -> QBetaElement {
        QBetaElement::one(&self.ctx)
    }

    pub fn point_from_rational(&self, r: &BigRational) -> QBetaElement {
        QBetaElement::from_rational(r, &self.ctx)
    }

    /// Branch index `k` with `x` in `I_k`, under the right-closed convention.
    /// Boundary membership is exact: `x` is in `I_0` iff `beta x - 1 <= 0`.
    pub fn classify(&self, x: &QBetaElement) -> Result<u32> {
        if x.sign() < 0 || x.cmp_rational(&BigRational::one()) == Ordering::Greater {
            return Err(Error::OutOfRange);
        }
        let bx = x.mul_beta();
        let mut k = 0u32;
        for j in 1..=self.m {
            if bx.cmp_rational(&BigRational::from_integer(j.into())) == Ordering::Greater {
                k = j;
            } else {
                break;
            }
        }
        Ok(k)
    }

    /// One application of the map: returns `(f(x), e, d)` with the branch
    /// sign `e` and the digit `d`.
    pub fn step(&self, x: &QBetaElement) -> Result<(QBetaElement, i8, u32)> {
        let k = self.classify(x)?;
        let e = self.signs.get(k);
        let bx = x.mul_beta();
        if e > 0 {
            Ok((bx.add_integer(-(k as i64)), e, k))
        } else {
            Ok((bx.neg().add_integer(k as i64 + 1), e, k + 1))
        }
    }

    /// The `(beta, E)`-expansion of `x`, computed by exact iteration.
    ///
    /// Stops early with shape `Finite` when the orbit hits 0 exactly and
    /// `E(0) = 1`; detects `Periodic`/`Preperiodic` by exact repetition of the
    /// state `(point, cumulative sign)`; otherwise returns `Truncated`.
    pub fn expand(&self, x: &QBetaElement, max_steps: usize) -> Result<Expansion> {
        Ok(self.expand_with_orbit(x, max_steps)?.0)
    }

    fn expand_with_orbit(
        &self,
        x0: &QBetaElement,
        max_steps: usize,
    ) -> Result<(Expansion, Vec<QBetaElement>, Vec<u32>)> {
        let mut x = x0.clone();
        let mut s: i8 = 1;
        let mut steps: Vec<ExpansionStep> = Vec::new();
        let mut symbols: Vec<u32> = Vec::new();
        let mut orbit: Vec<QBetaElement> = vec![x.clone()];
        if x.is_zero() && self.signs.get(0) == 1 {
            // 0 is a fixed point: its expansion is the empty sum
            let exp = Expansion::new(steps, Shape::Finite)?;
            return Ok((exp, orbit, symbols));
        }
        // hashing ignores the context's refinable interval cache, so the
        // key is stable despite the interior mutability clippy flags
        #[allow(clippy::mutable_key_type)]
        let mut seen: HashMap<(QBetaElement, i8), usize> = HashMap::new();
        seen.insert((x.clone(), s), 0);
        for count in 0..max_steps {
            let (x1, e, d) = self.step(&x)?;
            steps.push(ExpansionStep { s, d });
            symbols.push(if e > 0 { d } else { d - 1 });
            let s_next = e * s;
            if x1.is_zero() && self.signs.get(0) == 1 {
                // 0 is a fixed point with digit 0: the expansion is finite
                orbit.push(x1);
                let exp = Expansion::new(steps, Shape::Finite)?;
                return Ok((exp, orbit, symbols));
            }
            let t = count + 1;
            if let Some(&r) = seen.get(&(x1.clone(), s_next)) {
                let (k, p) = canonical_preperiod_period(&steps, r, t - r);
                steps.truncate(k + p);
                symbols.truncate(k + p);
                let shape = if k == 0 {
                    Shape::Periodic(p)
                } else {
                    Shape::Preperiodic(k, p)
                };
                let exp = Expansion::new(steps, shape)?;
                return Ok((exp, orbit, symbols));
            }
            seen.insert((x1.clone(), s_next), t);
            orbit.push(x1.clone());
            x = x1;
            s = s_next;
        }
        let n = steps.len();
        Ok((Expansion::new(steps, Shape::Truncated(n))?, orbit, symbols))
    }

    /// The infinite expansion of 1: the dynamical expansion, converted from
    /// finite form when the orbit of 1 hits 0.
    pub fn infinite_expansion_of_one(&self, max_steps: usize) -> Result<Expansion> {
        let exp = self.expand(&self.one(), max_steps)?;
        match exp.shape() {
            Shape::Finite => finite_to_infinite(&exp),
            _ => Ok(exp),
        }
    }

    /// Dynamical itinerary of a point: the branch indices of its exact orbit.
    ///
    /// When the orbit hits the fixed point 0, the itinerary continues with
    /// the symbol 0 forever, so the result is eventually periodic with tail
    /// `(0)`. This is the bound to use in the admissibility criterion; the
    /// itinerary derived from the infinite expansion via [`to_itinerary`] can
    /// differ at the final step of a finite expansion.
    pub fn itinerary(&self, x: &QBetaElement, max_steps: usize) -> Result<Itinerary> {
        let (exp, _, mut symbols) = self.expand_with_orbit(x, max_steps)?;
        match exp.shape() {
            Shape::Finite => {
                // orbit reached the fixed point 0: periodic zero tail
                symbols.push(0);
                let k0 = symbols.len() - 1;
                let (k, p) = canonical_preperiod_period(&symbols, k0, 1);
                symbols.truncate(k + p);
                let shape = if k == 0 {
                    Shape::Periodic(p)
                } else {
                    Shape::Preperiodic(k, p)
                };
                Ok(Itinerary::new(symbols, shape))
            }
            Shape::Periodic(p) | Shape::Preperiodic(_, p) => {
                let k0 = symbols.len() - p;
                let (k, p) = canonical_preperiod_period(&symbols, k0, p);
                symbols.truncate(k + p);
                let shape = if k == 0 {
                    Shape::Periodic(p)
                } else {
                    Shape::Preperiodic(k, p)
                };
                Ok(Itinerary::new(symbols, shape))
            }
            Shape::Truncated(n) => Ok(Itinerary::new(symbols, Shape::Truncated(n))),
        }
    }

    /// Detects post-critical finiteness by exact iteration of the orbit of 1,
    /// memoizing coordinate states. Finite expansions are converted to their
    /// infinite form before the minimal `(preperiod, period)` is extracted.
    pub fn detect_pcf(&self, max_steps: usize) -> Result<PcfOutcome> {
        let (exp, orbit, _) = self.expand_with_orbit(&self.one(), max_steps)?;
        let infinite = match exp.shape() {
            Shape::Finite => finite_to_infinite(&exp)?,
            Shape::Truncated(_) => return Ok(PcfOutcome::Undetermined),
            _ => exp,
        };
        let (preperiod, period) = match infinite.shape() {
            Shape::Periodic(p) => (0, p),
            Shape::Preperiodic(k, p) => (k, p),
            _ => unreachable!(),
        };
        let mut distinct: Vec<ZBetaElement> = Vec::new();
        for point in &orbit {
            let z = point
                .to_zbeta()
                .expect("PCF orbit points stay in Z[beta] (monic defining polynomial)");
            if !distinct.contains(&z) {
                distinct.push(z);
            }
        }
        Ok(PcfOutcome::Pcf(PcfData {
            preperiod,
            period,
            orbit: distinct,
            expansion: infinite,
        }))
    }
}

/// Minimal `(preperiod, period)` for a sequence known to be periodic with
/// period `p0` from index `k0` (one full cycle must be recorded).
fn canonical_preperiod_period<T: PartialEq>(pairs: &[T], k0: usize, p0: usize) -> (usize, usize) {
    debug_assert!(pairs.len() >= k0 + p0);
    let cycle = &pairs[k0..k0 + p0];
    let p = (1..=p0)
        .filter(|d| p0.is_multiple_of(*d))
        .find(|&d| (0..p0).all(|i| cycle[i] == cycle[(i + d) % p0]))
        .unwrap_or(p0);
    let mut k = k0;
    while k > 0 && pairs[k - 1] == pairs[k - 1 + p] {
        k -= 1;
    }
    (k, p)
}

/// Converts the finite expansion of 1 into the infinite one: the last digit
/// is lowered by `s(n)` (so `d'(n) = d(n) - 1` when `s(n) = 1` and
/// `d(n) + 1` when `s(n) = -1`) and the adjusted block repeats forever.
pub fn finite_to_infinite(exp: &Expansion) -> Result<Expansion> {
    if !matches!(exp.shape(), Shape::Finite) {
        return Err(Error::NotFinite);
    }
    let mut block = exp.steps().to_vec();
    let last = block
        .last_mut()
        .ok_or_else(|| Error::InvalidInput("empty finite expansion".into()))?;
    if last.s == 1 {
        last.d -= 1;
    } else {
        last.d += 1;
    }
    let n = block.len();
    // the block may itself have a smaller cyclic period
    let p = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (0..n).all(|i| block[i] == block[i % d]))
        .unwrap_or(n);
    block.truncate(p);
    Expansion::new(block, Shape::Periodic(p))
}

/// Converts the finite expansion of a general point `x` into its infinite
/// form: the adjusted prefix followed by the infinite expansion of 1.
pub fn finite_to_infinite_of_point(exp: &Expansion, one_exp: &Expansion) -> Result<Expansion> {
    if !matches!(exp.shape(), Shape::Finite) {
        return Err(Error::NotFinite);
    }
    if !one_exp.is_infinite() {
        return Err(Error::NotInfinite);
    }
    let mut prefix = exp.steps().to_vec();
    let last = prefix
        .last_mut()
        .ok_or_else(|| Error::InvalidInput("empty finite expansion".into()))?;
    if last.s == 1 {
        last.d -= 1;
    } else {
        last.d += 1;
    }
    let (k1, p1) = match one_exp.shape() {
        Shape::Periodic(p) => (0, p),
        Shape::Preperiodic(k, p) => (k, p),
        _ => unreachable!(),
    };
    let k_raw = prefix.len() + k1;
    let mut pairs = prefix;
    pairs.extend_from_slice(one_exp.steps());
    let (k, p) = canonical_preperiod_period(&pairs, k_raw, p1);
    pairs.truncate(k + p);
    let shape = if k == 0 {
        Shape::Periodic(p)
    } else {
        Shape::Preperiodic(k, p)
    };
    Expansion::new(pairs, shape)
}

/// Maps an infinite expansion to its itinerary:
/// `It(j) = d(j)` when `s(j+1) = s(j)`, else `d(j) - 1`.
pub fn to_itinerary(exp: &Expansion) -> Result<Itinerary> {
    let (symbols_len, wrap_to) = match exp.shape() {
        Shape::Finite => return Err(Error::NotInfinite),
        Shape::Periodic(p) => (p, Some(0)),
        Shape::Preperiodic(k, p) => (k + p, Some(k)),
        Shape::Truncated(n) => {
            if n == 0 {
                return Ok(Itinerary::new(Vec::new(), Shape::Truncated(0)));
            }
            (n - 1, None)
        }
    };
    let steps = exp.steps();
    let mut symbols = Vec::with_capacity(symbols_len);
    for j in 0..symbols_len {
        let s_next = if j + 1 < steps.len() {
            steps[j + 1].s
        } else {
            steps[wrap_to.expect("truncated length excludes the last step")].s
        };
        let d = steps[j].d;
        let sym = if s_next == steps[j].s {
            d
        } else {
            d.checked_sub(1)
                .expect("sign change across a zero digit cannot occur")
        };
        symbols.push(sym);
    }
    let shape = match exp.shape() {
        Shape::Periodic(p) => Shape::Periodic(p),
        Shape::Preperiodic(k, p) => Shape::Preperiodic(k, p),
        Shape::Truncated(_) => Shape::Truncated(symbols_len),
        Shape::Finite => unreachable!(),
    };
    Ok(Itinerary::new(symbols, shape))
}

/// The sign-twisted lexicographic order on finite words over `{0, ..., m}`.
///
/// At the first disagreement the natural digit order is used when the sign
/// of the common prefix is +1 and reversed when it is -1. When one word is a
/// proper prefix of the other, the shorter sorts first under prefix sign +1
/// and last under -1; `Equal` is returned only for identical words.
pub fn order_e(w: &[u32], v: &[u32], signs: &SignConfiguration) -> Result<Ordering> {
    let m = signs.len() as u32 - 1;
    for &sym in w.iter().chain(v.iter()) {
        if sym > m {
            return Err(Error::InvalidSymbol { symbol: sym, m });
        }
    }
    let mut prefix_sign = 1i8;
    let common = w.len().min(v.len());
    for j in 0..common {
        if w[j] != v[j] {
            let natural = w[j].cmp(&v[j]);
            return Ok(if prefix_sign > 0 {
                natural
            } else {
                natural.reverse()
            });
        }
        prefix_sign *= signs.get(w[j]);
    }
    let by_len = w.len().cmp(&v.len());
    Ok(if prefix_sign > 0 { by_len } else { by_len.reverse() })
}

/// Admissibility on the available horizon: every shift of `w` must satisfy
/// `shift(w) <=_E it1` in the sign-twisted order. Words supplied as periodic
/// or preperiodic are checked over all distinct shifts; truncated words get
/// the verdict for their recorded prefix.
pub fn is_admissible(w: &Itinerary, it1: &Itinerary, signs: &SignConfiguration) -> Result<bool> {
    let body_w = w.body_len().max(1);
    let body_1 = it1.body_len().max(1);
    let horizon = 2 * (body_w + body_1) + 8;
    let w_sym = w.unroll(horizon);
    let it1_sym = it1.unroll(horizon);
    let shifts = match w.shape() {
        Shape::Periodic(_) | Shape::Preperiodic(_, _) => body_w,
        _ => w_sym.len(),
    };
    for j in 0..shifts {
        if j >= w_sym.len() {
            break;
        }
        let shifted = &w_sym[j..];
        let n = shifted.len().min(it1_sym.len());
        if order_e(&shifted[..n], &it1_sym[..n], signs)? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}
