//! Continuous piecewise-linear interval maps: normalization of unimodal
//! uniform expanders to the two-branch transformation normal form, and
//! topological entropy by exact lap counting.
//!
//! Breakpoints and values are exact elements of `Q(beta)`, so lap counting
//! never merges or splits branches spuriously: a turning point either lies
//! strictly inside an image interval or it does not, decided by exact
//! comparison. Entropy is estimated from the lap sequence `L(n)` both as
//! `log L(n)/n` and as the ratio `log(L(n)/L(n-1))`; the ratio estimator
//! converges geometrically and is the one used for cross-checks, since the
//! plain quotient carries an `O(1/n)` bias from the multiplicative constant
//! in `L(n) ~ C beta^n`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebraic::{AlgebraicReal, BetaContext, QBetaElement};
use crate::error::Error;
use crate::map::{GBetaMap, SignConfiguration};
use crate::poly;
use crate::Result;

/// A continuous piecewise-linear self-map of `[0, 1]` with exact data.
///
/// Consecutive segments with equal slopes are merged at construction, so the
/// breakpoint list is canonical.
#[derive(Debug, Clone)]
pub struct PiecewiseLinearMap {
    breakpoints: Vec<QBetaElement>,
    values: Vec<QBetaElement>,
    slopes: Vec<QBetaElement>,
    ctx: Arc<BetaContext>,
}

/// JSON form: rational breakpoints and values as `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseLinearMapJson {
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
}

impl PiecewiseLinearMap {
    pub fn new(breakpoints: Vec<QBetaElement>, values: Vec<QBetaElement>) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return Err(Error::InvalidInput(
                "need equally many breakpoints and values, at least two".into(),
            ));
        }
        let ctx = Arc::clone(breakpoints[0].context());
        let zero = QBetaElement::zero(&ctx);
        let one = QBetaElement::one(&ctx);
        if breakpoints[0] != zero || breakpoints[breakpoints.len() - 1] != one {
            return Err(Error::InvalidInput(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        for pair in breakpoints.windows(2) {
            if pair[0].compare(&pair[1]) != Ordering::Less {
                return Err(Error::InvalidInput(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        for v in &values {
            if v.sign() < 0 || v.compare(&one) == Ordering::Greater {
                return Err(Error::InvalidInput("values must lie in [0, 1]".into()));
            }
        }
        let mut slopes = Vec::with_capacity(breakpoints.len() - 1);
        for i in 0..breakpoints.len() - 1 {
            let dx = breakpoints[i + 1].sub(&breakpoints[i]);
            let dv = values[i + 1].sub(&values[i]);
            let slope = dv.div(&dx)?;
            if slope.is_zero() {
                return Err(Error::InvalidInput(
                    "flat segments are not piecewise monotone".into(),
                ));
            }
            slopes.push(slope);
        }
        // merge consecutive segments with identical slopes
        let mut bp = vec![breakpoints[0].clone()];
        let mut vals = vec![values[0].clone()];
        let mut sl = vec![slopes[0].clone()];
        for i in 1..slopes.len() {
            if slopes[i] != *sl.last().unwrap() {
                bp.push(breakpoints[i].clone());
                vals.push(values[i].clone());
                sl.push(slopes[i].clone());
            }
        }
        bp.push(breakpoints[breakpoints.len() - 1].clone());
        vals.push(values[values.len() - 1].clone());
        Ok(PiecewiseLinearMap {
            breakpoints: bp,
            values: vals,
            slopes: sl,
            ctx,
        })
    }

    /// Builds a rational-coordinate map from its JSON form.
    pub fn from_json(json: &PiecewiseLinearMapJson) -> Result<Self> {
        let ctx = BetaContext::new(AlgebraicReal::from_integer(1));
        let parse = |strings: &[String]| -> Result<Vec<QBetaElement>> {
            strings
                .iter()
                .map(|s| Ok(QBetaElement::from_rational(&poly::parse_rational(s)?, &ctx)))
                .collect()
        };
        Self::new(parse(&json.breakpoints)?, parse(&json.values)?)
    }

    pub fn to_json(&self) -> Result<PiecewiseLinearMapJson> {
        let fmt = |els: &[QBetaElement]| -> Result<Vec<String>> {
            els.iter()
                .map(|e| {
                    e.as_rational()
                        .map(|r| poly::format_rational(&r))
                        .ok_or_else(|| {
                            Error::InvalidInput(
                                "map has irrational data; no rational JSON form".into(),
                            )
                        })
                })
                .collect()
        };
        Ok(PiecewiseLinearMapJson {
            breakpoints: fmt(&self.breakpoints)?,
            values: fmt(&self.values)?,
        })
    }

    /// The continuous representation of a two-branch transformation
    /// (sign configurations `(1,-1)` and `(-1,1)`; others are discontinuous).
    pub fn from_gbeta(map: &GBetaMap) -> Result<Self> {
        if map.m() != 1 {
            return Err(Error::NotUnimodal);
        }
        let ctx = map.context();
        let beta = QBetaElement::beta(ctx);
        let one = QBetaElement::one(ctx);
        let inv_beta = beta.inv()?;
        let e = (map.signs().get(0), map.signs().get(1));
        let (values, _case) = match e {
            (1, -1) => (
                vec![
                    QBetaElement::zero(ctx),
                    one.clone(),
                    QBetaElement::from_rational(&BigRational::from_integer(2.into()), ctx)
                        .sub(&beta),
                ],
                1,
            ),
            (-1, 1) => (
                vec![one.clone(), QBetaElement::zero(ctx), beta.sub(&one)],
                2,
            ),
            _ => {
                return Err(Error::InvalidInput(
                    "only the (1,-1) and (-1,1) configurations are continuous".into(),
                ));
            }
        };
        Self::new(vec![QBetaElement::zero(ctx), inv_beta, one], values)
    }

    pub fn context(&self) -> &Arc<BetaContext> {
        &self.ctx
    }

    pub fn breakpoints(&self) -> &[QBetaElement] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[QBetaElement] {
        &self.values
    }

    pub fn slopes(&self) -> &[QBetaElement] {
        &self.slopes
    }

    pub fn eval(&self, x: &QBetaElement) -> Result<QBetaElement> {
        let n = self.breakpoints.len();
        if x.compare(&self.breakpoints[0]) == Ordering::Less
            || x.compare(&self.breakpoints[n - 1]) == Ordering::Greater
        {
            return Err(Error::OutOfRange);
        }
        let mut seg = n - 2;
        for i in 0..n - 1 {
            if x.compare(&self.breakpoints[i + 1]) != Ordering::Greater {
                seg = i;
                break;
            }
        }
        let dx = x.sub(&self.breakpoints[seg]);
        Ok(self.values[seg].add(&self.slopes[seg].mul(&dx)))
    }

    /// Turning points: interior breakpoints where the slope changes sign.
    fn turning_points(&self) -> Vec<QBetaElement> {
        let mut out = Vec::new();
        for i in 1..self.slopes.len() {
            if self.slopes[i - 1].sign() != self.slopes[i].sign() {
                out.push(self.breakpoints[i].clone());
            }
        }
        out
    }

    /// Exact image `f([lo, hi])` as an interval.
    fn image(&self, lo: &QBetaElement, hi: &QBetaElement) -> Result<(QBetaElement, QBetaElement)> {
        let mut candidates = vec![self.eval(lo)?, self.eval(hi)?];
        for (i, b) in self.breakpoints.iter().enumerate() {
            if b.compare(lo) == Ordering::Greater && b.compare(hi) == Ordering::Less {
                candidates.push(self.values[i].clone());
            }
        }
        let mut min = candidates[0].clone();
        let mut max = candidates[0].clone();
        for c in &candidates[1..] {
            if c.compare(&min) == Ordering::Less {
                min = c.clone();
            }
            if c.compare(&max) == Ordering::Greater {
                max = c.clone();
            }
        }
        Ok((min, max))
    }

    /// Reflection conjugate `x -> 1 - f(1 - x)`.
    pub fn reflected(&self) -> Self {
        let one = QBetaElement::one(&self.ctx);
        let breakpoints: Vec<QBetaElement> =
            self.breakpoints.iter().rev().map(|b| one.sub(b)).collect();
        let values: Vec<QBetaElement> = self.values.iter().rev().map(|v| one.sub(v)).collect();
        Self::new(breakpoints, values).expect("reflection preserves validity")
    }

    /// Checks the map is unimodal (exactly one turning point) and returns the
    /// common slope magnitude, requiring it to exceed 1.
    pub fn uniform_expander_slope(&self) -> Result<QBetaElement> {
        if self.turning_points().len() != 1 {
            return Err(Error::NotUnimodal);
        }
        let lambda = {
            let s = &self.slopes[0];
            if s.sign() < 0 {
                s.neg()
            } else {
                s.clone()
            }
        };
        for s in &self.slopes[1..] {
            let mag = if s.sign() < 0 { s.neg() } else { s.clone() };
            if mag != lambda && mag.compare(&lambda) != Ordering::Equal {
                return Err(Error::NotUniform);
            }
        }
        if lambda.cmp_rational(&BigRational::from_integer(1.into())) != Ordering::Greater {
            return Err(Error::NotExpanding);
        }
        Ok(lambda)
    }
}

/// The affine change of coordinates applied during normalization.
#[derive(Debug, Clone)]
pub struct Conjugacy {
    /// Left end of the trapping interval in original coordinates.
    pub a: QBetaElement,
    /// Right end of the trapping interval.
    pub b: QBetaElement,
    /// Whether the orientation flip `y -> 1 - y` was applied after rescaling.
    pub flipped: bool,
}

/// A normalized unimodal uniform expander: a genuine two-branch
/// transformation plus the conjugacy that got there.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub map: GBetaMap,
    pub conjugacy: Conjugacy,
    /// Which of the four surjective cases the trimmed map fell into.
    pub case: u8,
}

/// Normalizes a PCF unimodal uniform expander: trim to the trapping interval,
/// rescale to `[0, 1]`, reflect when the full branch is the second one, and
/// certify the result agrees exactly with the two-branch formula.
pub fn normalize(g: &PiecewiseLinearMap) -> Result<NormalForm> {
    let lambda = g.uniform_expander_slope()?;
    let ctx = g.context();

    // trapping interval: iterate J -> f(J) until exactly stable
    let mut lo = QBetaElement::zero(ctx);
    let mut hi = QBetaElement::one(ctx);
    let mut stable = false;
    for _ in 0..128 {
        let (nlo, nhi) = g.image(&lo, &hi)?;
        if nlo == lo && nhi == hi {
            stable = true;
            break;
        }
        lo = nlo;
        hi = nhi;
    }
    if !stable {
        return Err(Error::InvalidInput(
            "trapping interval did not stabilize; is the map post-critically finite?".into(),
        ));
    }
    if lo.compare(&hi) != Ordering::Less {
        return Err(Error::InvalidInput("trapping interval is degenerate".into()));
    }

    // restrict to [lo, hi] and rescale to [0, 1]
    let width = hi.sub(&lo);
    let inv_width = width.inv()?;
    let mut bps = vec![QBetaElement::zero(ctx)];
    let mut vals = vec![g.eval(&lo)?.sub(&lo).mul(&inv_width)];
    for (i, b) in g.breakpoints().iter().enumerate() {
        if b.compare(&lo) == Ordering::Greater && b.compare(&hi) == Ordering::Less {
            bps.push(b.sub(&lo).mul(&inv_width));
            vals.push(g.values()[i].sub(&lo).mul(&inv_width));
        }
    }
    bps.push(QBetaElement::one(ctx));
    vals.push(g.eval(&hi)?.sub(&lo).mul(&inv_width));
    let mut trimmed = PiecewiseLinearMap::new(bps, vals)?;

    // classify the surjective shape
    let one = QBetaElement::one(ctx);
    let zero = QBetaElement::zero(ctx);
    let increasing_first = trimmed.slopes()[0].sign() > 0;
    let g0 = trimmed.values()[0].clone();
    let g1 = trimmed.values()[trimmed.values().len() - 1].clone();
    let case = if increasing_first {
        if g0 == zero {
            1 // first branch full, rises 0 -> 1
        } else if g1 == zero {
            4 // second branch full, falls 1 -> 0
        } else {
            return Err(Error::InvalidInput(
                "trimmed map is not surjective; no full branch".into(),
            ));
        }
    } else if g0 == one {
        2 // first branch full, falls 1 -> 0
    } else if g1 == one {
        3 // second branch full, rises 0 -> 1
    } else {
        return Err(Error::InvalidInput(
            "trimmed map is not surjective; no full branch".into(),
        ));
    };

    let flipped = case == 3 || case == 4;
    if flipped {
        trimmed = trimmed.reflected();
    }

    // certify the exact two-branch shape
    let signs = if trimmed.slopes()[0].sign() > 0 {
        SignConfiguration::new(vec![1, -1])?
    } else {
        SignConfiguration::new(vec![-1, 1])?
    };
    let inv_lambda = lambda.inv()?;
    if trimmed.breakpoints().len() != 3 || trimmed.breakpoints()[1] != inv_lambda {
        return Err(Error::InvalidInput(
            "normalized turning point is not 1/lambda; the input is not a uniform expander"
                .into(),
        ));
    }

    // lambda as defining data for the transformation
    let beta = if let Some(r) = lambda.as_rational() {
        AlgebraicReal::from_rational(r)
    } else if lambda == QBetaElement::beta(ctx) {
        ctx.beta().clone()
    } else {
        return Err(Error::InvalidInput(
            "slope must be rational or the generator of the coordinate field".into(),
        ));
    };
    let map = GBetaMap::new(beta, signs)?;

    // the trimmed map must equal the formula map exactly
    let formula = PiecewiseLinearMap::from_gbeta(&map)?;
    let ctx_formula_vals: Vec<QBetaElement> = formula
        .values()
        .iter()
        .map(|v| convert_to_ctx(v, ctx))
        .collect::<Result<_>>()?;
    for (got, want) in trimmed.values().iter().zip(&ctx_formula_vals) {
        if got.compare(want) != Ordering::Equal {
            return Err(Error::InvalidInput(
                "trimmed map does not match the two-branch formula".into(),
            ));
        }
    }

    Ok(NormalForm {
        map,
        conjugacy: Conjugacy {
            a: lo,
            b: hi,
            flipped,
        },
        case,
    })
}

/// Re-expresses an element of the formula map's context in the input context,
/// which shares the same generator value.
fn convert_to_ctx(v: &QBetaElement, ctx: &Arc<BetaContext>) -> Result<QBetaElement> {
    if v.context().same_as(ctx) {
        return Ok(v.clone());
    }
    if let Some(r) = v.as_rational() {
        return Ok(QBetaElement::from_rational(&r, ctx));
    }
    // both contexts are generated by the same beta: re-read raw coordinates
    if v.context().poly() == ctx.poly() {
        return Ok(v.clone());
    }
    Err(Error::InvalidInput(
        "cannot convert between unrelated coordinate fields".into(),
    ))
}

/// Lap sequence and entropy estimates.
#[derive(Debug, Clone, Serialize)]
pub struct LapReport {
    /// `L(1), ..., L(n_max)`.
    pub laps: Vec<usize>,
    /// `log L(n_max) / n_max` (biased by the constant in `L ~ C beta^n`).
    pub naive_estimate: f64,
    /// `log(L(n_max) / L(n_max - 1))`, the estimate used for cross-checks.
    pub ratio_estimate: f64,
}

/// Counts monotone branches of the iterates by exact propagation of image
/// intervals; branch images are split at turning points strictly inside.
pub fn lap_entropy(f: &PiecewiseLinearMap, n_max: usize, cap: usize) -> Result<LapReport> {
    if n_max < 2 {
        return Err(Error::InvalidInput("need n_max >= 2".into()));
    }
    let turning = f.turning_points();
    // level 1: maximal monotone branches of f
    let mut cuts = vec![f.breakpoints()[0].clone()];
    cuts.extend(turning.iter().cloned());
    cuts.push(f.breakpoints()[f.breakpoints().len() - 1].clone());
    let mut branches: Vec<(QBetaElement, QBetaElement)> = Vec::new();
    for pair in cuts.windows(2) {
        let (ilo, ihi) = f.image(&pair[0], &pair[1])?;
        branches.push((ilo, ihi));
    }
    let mut laps = vec![branches.len()];
    for n in 1..n_max {
        let mut next = Vec::with_capacity(branches.len() * 2);
        for (ilo, ihi) in &branches {
            // split the image at turning points strictly inside
            let mut pts = vec![ilo.clone()];
            for t in &turning {
                if t.compare(ilo) == Ordering::Greater && t.compare(ihi) == Ordering::Less {
                    pts.push(t.clone());
                }
            }
            pts.push(ihi.clone());
            for pair in pts.windows(2) {
                let a = f.eval(&pair[0])?;
                let b = f.eval(&pair[1])?;
                if a.compare(&b) == Ordering::Greater {
                    next.push((b, a));
                } else {
                    next.push((a, b));
                }
            }
            if next.len() > cap {
                return Err(Error::ExplodedBreakpointCount { n: n + 1, cap });
            }
        }
        branches = next;
        laps.push(branches.len());
    }
    let l_last = laps[n_max - 1] as f64;
    let l_prev = laps[n_max - 2] as f64;
    Ok(LapReport {
        naive_estimate: l_last.ln() / n_max as f64,
        ratio_estimate: (l_last / l_prev).ln(),
        laps,
    })
}

/// Entropy cross-check: lap estimate of the normal form against `log beta`.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub lap_estimate: f64,
    pub naive_estimate: f64,
    pub log_beta: f64,
    pub gap: f64,
    pub laps: Vec<usize>,
}

pub fn entropy_cross_check(nf: &NormalForm, n_max: usize) -> Result<EntropyReport> {
    let pl = PiecewiseLinearMap::from_gbeta(&nf.map)?;
    let report = lap_entropy(&pl, n_max, 4_000_000)?;
    let log_beta = nf.map.context().beta_f64().ln();
    Ok(EntropyReport {
        lap_estimate: report.ratio_estimate,
        naive_estimate: report.naive_estimate,
        log_beta,
        gap: (report.ratio_estimate - log_beta).abs(),
        laps: report.laps,
    })
}
