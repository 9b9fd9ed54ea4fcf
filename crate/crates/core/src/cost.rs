//! Exact cost expressions over the Bell-pair consumption time `t`.
//!
//! Every cost in this crate is a convex piecewise-affine function of `t`,
//! stored as the upper envelope `max_i (intercept_i + slope_i * t)` over a
//! closed evaluation domain. All arithmetic is exact (`BigRational`); the only
//! place a value is rounded is [`round_cycles`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// `numer / denom` as an exact rational.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("negative {what} rejected: {value}")]
    Negative { what: &'static str, value: String },
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("t_bell = {t} outside evaluation domain {domain}")]
    OutOfDomain { t: String, domain: String },
    #[error("invalid domain: lower bound {lo} exceeds upper bound {hi}")]
    InvalidDomain { lo: String, hi: String },
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p`, `p/q`, or a plain decimal such as `9.19` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, CostError> {
    let text = text.trim();
    let err = || CostError::Parse(text.to_string());
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let numer: BigInt = digits.parse().map_err(|_| err())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = text.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Fixed-point decimal rendering used in human-facing messages.
pub fn format_decimal(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (value * Rational::from_integer(scale.clone())).round().to_integer();
    let negative = scaled.is_negative();
    let (whole, frac) = scaled.abs().div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if places > 0 {
        let frac = format!("{:0>width$}", frac.to_string(), width = places);
        let frac = frac.trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

/// Round half-up to the nearest whole logical cycle.
///
/// Saturates at `u64::MAX`; negative inputs clamp to zero.
pub fn round_cycles(value: &Rational) -> u64 {
    if value.is_negative() {
        return 0;
    }
    let half = rat(1, 2);
    (value + half).floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// A non-negative number of logical cycles, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleCount(Rational);

impl CycleCount {
    pub fn new(value: Rational) -> Result<Self, CostError> {
        if value.is_negative() {
            return Err(CostError::Negative {
                what: "cycle count",
                value: format_rational(&value),
            });
        }
        Ok(Self(value))
    }

    pub fn exact(&self) -> &Rational {
        &self.0
    }

    pub fn rounded(&self) -> u64 {
        round_cycles(&self.0)
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl fmt::Display for CycleCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

/// Closed interval of admissible `t` values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    lo: Rational,
    hi: Rational,
}

impl Domain {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, CostError> {
        if lo > hi {
            return Err(CostError::InvalidDomain {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.lo <= t && t <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }
}

impl Default for Domain {
    /// The network-penalty range `[2, 10]`.
    fn default() -> Self {
        Self {
            lo: int(2),
            hi: int(10),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// `intercept + slope * t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineTerm {
    pub intercept: Rational,
    pub slope: Rational,
}

impl AffineTerm {
    pub fn eval(&self, t: &Rational) -> Rational {
        &self.intercept + &self.slope * t
    }

    fn plus(&self, other: &AffineTerm) -> AffineTerm {
        AffineTerm {
            intercept: &self.intercept + &other.intercept,
            slope: &self.slope + &other.slope,
        }
    }
}

impl fmt::Display for AffineTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}·t",
            format_rational(&self.intercept),
            format_rational(&self.slope)
        )
    }
}

/// Convex piecewise-affine cost, `max` over its terms, on a closed domain.
///
/// Terms are kept in canonical form: sorted by ascending slope, each one
/// maximal on a sub-interval of positive length (or the single best term on a
/// degenerate domain).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostExpr {
    terms: Vec<AffineTerm>,
    domain: Domain,
}

impl CostExpr {
    /// One-term expression on the default domain.
    pub fn affine(intercept: Rational, slope: Rational) -> Result<Self, CostError> {
        Self::affine_on(intercept, slope, Domain::default())
    }

    pub fn affine_on(intercept: Rational, slope: Rational, domain: Domain) -> Result<Self, CostError> {
        if intercept.is_negative() {
            return Err(CostError::Negative {
                what: "intercept",
                value: format_rational(&intercept),
            });
        }
        if slope.is_negative() {
            return Err(CostError::Negative {
                what: "slope",
                value: format_rational(&slope),
            });
        }
        Ok(Self {
            terms: vec![AffineTerm { intercept, slope }],
            domain,
        })
    }

    pub fn constant(value: Rational, domain: Domain) -> Result<Self, CostError> {
        Self::affine_on(value, Rational::zero(), domain)
    }

    /// `slope * t` with no intercept.
    pub fn per_bell(slope: Rational, domain: Domain) -> Result<Self, CostError> {
        Self::affine_on(Rational::zero(), slope, domain)
    }

    pub fn zero(domain: Domain) -> Self {
        Self {
            terms: vec![AffineTerm {
                intercept: Rational::zero(),
                slope: Rational::zero(),
            }],
            domain,
        }
    }

    /// Builds the canonical envelope of arbitrary non-negative terms.
    pub fn from_terms(terms: Vec<AffineTerm>, domain: Domain) -> Result<Self, CostError> {
        if terms.is_empty() {
            return Ok(Self::zero(domain));
        }
        for term in &terms {
            if term.intercept.is_negative() || term.slope.is_negative() {
                return Err(CostError::Negative {
                    what: "term",
                    value: term.to_string(),
                });
            }
        }
        Ok(Self {
            terms: prune(terms, &domain),
            domain,
        })
    }

    pub fn terms(&self) -> &[AffineTerm] {
        &self.terms
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Same function, re-anchored on a different domain and re-pruned.
    pub fn with_domain(&self, domain: Domain) -> Self {
        Self {
            terms: prune(self.terms.clone(), &domain),
            domain,
        }
    }

    fn check_domain(&self, other: &CostExpr) -> Result<(), CostError> {
        if self.domain != other.domain {
            return Err(CostError::DomainMismatch(
                self.domain.to_string(),
                other.domain.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &CostExpr) -> Result<CostExpr, CostError> {
        self.check_domain(other)?;
        let mut sums = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                sums.push(a.plus(b));
            }
        }
        Ok(Self {
            terms: prune(sums, &self.domain),
            domain: self.domain.clone(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> Result<CostExpr, CostError> {
        if factor.is_negative() {
            return Err(CostError::Negative {
                what: "scalar",
                value: format_rational(factor),
            });
        }
        if factor.is_zero() {
            return Ok(Self::zero(self.domain.clone()));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| AffineTerm {
                intercept: &t.intercept * factor,
                slope: &t.slope * factor,
            })
            .collect();
        Ok(Self {
            terms,
            domain: self.domain.clone(),
        })
    }

    pub fn max_of(&self, other: &CostExpr) -> Result<CostExpr, CostError> {
        self.check_domain(other)?;
        let mut all = self.terms.clone();
        all.extend(other.terms.iter().cloned());
        Ok(Self {
            terms: prune(all, &self.domain),
            domain: self.domain.clone(),
        })
    }

    pub fn eval(&self, t_bell: &Rational) -> Result<CycleCount, CostError> {
        if !self.domain.contains(t_bell) {
            return Err(CostError::OutOfDomain {
                t: format_rational(t_bell),
                domain: self.domain.to_string(),
            });
        }
        Ok(CycleCount(self.eval_unchecked(t_bell)))
    }

    /// Evaluation without the domain check; used by crossover scans and oracles.
    pub fn eval_unchecked(&self, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|term| term.eval(t))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Right-hand slope at `t`: the largest slope among the terms active there.
    pub fn slope_at(&self, t_bell: &Rational) -> Rational {
        let value = self.eval_unchecked(t_bell);
        self.terms
            .iter()
            .filter(|term| term.eval(t_bell) == value)
            .map(|term| term.slope.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Interior breakpoints of the envelope, ascending.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.terms
            .windows(2)
            .filter_map(|w| intersection(&w[0], &w[1]))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.intercept.is_zero() && t.slope.is_zero())
    }
}

impl fmt::Display for CostExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("max(")?;
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{term}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for CostExpr {
    type Err = CostError;

    /// Parses the canonical `max(a + b·t, ...)` form on the default domain.
    /// `*` is accepted in place of `·`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || CostError::Parse(text.to_string());
        let inner = text
            .trim()
            .strip_prefix("max(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(err)?;
        let mut terms = Vec::new();
        for part in inner.split(',') {
            let (a, b) = part.split_once('+').ok_or_else(err)?;
            let b = b
                .trim()
                .strip_suffix("t")
                .and_then(|s| s.strip_suffix('·').or_else(|| s.strip_suffix('*')))
                .ok_or_else(err)?;
            terms.push(AffineTerm {
                intercept: parse_rational(a)?,
                slope: parse_rational(b)?,
            });
        }
        Self::from_terms(terms, Domain::default())
    }
}

fn intersection(a: &AffineTerm, b: &AffineTerm) -> Option<Rational> {
    if a.slope == b.slope {
        return None;
    }
    Some((&b.intercept - &a.intercept) / (&a.slope - &b.slope))
}

/// Upper envelope of `terms`, restricted to those maximal on a positive-length
/// piece of `domain`.
fn prune(mut terms: Vec<AffineTerm>, domain: &Domain) -> Vec<AffineTerm> {
    if domain.lo == domain.hi {
        let t = &domain.lo;
        let best = terms
            .into_iter()
            .max_by(|a, b| match a.eval(t).cmp(&b.eval(t)) {
                Ordering::Equal => a.slope.cmp(&b.slope),
                other => other,
            })
            .expect("non-empty term set");
        return vec![best];
    }

    terms.sort_by(|a, b| a.slope.cmp(&b.slope).then_with(|| a.intercept.cmp(&b.intercept)));
    // equal slopes: keep the largest intercept (the last one after sorting)
    let mut distinct: Vec<AffineTerm> = Vec::with_capacity(terms.len());
    for term in terms {
        if let Some(last) = distinct.last_mut() {
            if last.slope == term.slope {
                *last = term;
                continue;
            }
        }
        distinct.push(term);
    }

    // convex hull over the whole line, slopes ascending
    let mut hull: Vec<AffineTerm> = Vec::with_capacity(distinct.len());
    for term in distinct {
        while hull.len() >= 2 {
            let l1 = &hull[hull.len() - 2];
            let l2 = &hull[hull.len() - 1];
            let x12 = intersection(l1, l2).expect("distinct slopes");
            let x13 = intersection(l1, &term).expect("distinct slopes");
            if x13 <= x12 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(term);
    }

    // keep segments overlapping the domain with positive length
    let n = hull.len();
    let mut kept = Vec::with_capacity(n);
    for i in 0..n {
        let start = if i == 0 {
            None
        } else {
            intersection(&hull[i - 1], &hull[i])
        };
        let end = if i + 1 == n {
            None
        } else {
            intersection(&hull[i], &hull[i + 1])
        };
        let lo = match start {
            Some(s) if s > domain.lo => s,
            _ => domain.lo.clone(),
        };
        let hi = match end {
            Some(e) if e < domain.hi => e,
            _ => domain.hi.clone(),
        };
        if lo < hi {
            kept.push(hull[i].clone());
        }
    }
    kept
}

/// Smallest `t` in the shared domain at which the truth of `f(t) >= g(t)`
/// differs from its value at the lower domain bound.
///
/// When the flip happens on an open interval the infimum is returned (the
/// intersection point). `None` if the relation never changes on the domain.
pub fn crossover_t(f: &CostExpr, g: &CostExpr) -> Result<Option<Rational>, CostError> {
    f.check_domain(g)?;
    let domain = f.domain();
    let mut points = vec![domain.lo.clone(), domain.hi.clone()];
    points.extend(f.breakpoints());
    points.extend(g.breakpoints());
    for a in f.terms() {
        for b in g.terms() {
            if let Some(x) = intersection(a, b) {
                points.push(x);
            }
        }
    }
    points.retain(|x| domain.contains(x));
    points.sort();
    points.dedup();

    let holds = |t: &Rational| f.eval_unchecked(t) >= g.eval_unchecked(t);
    let initial = holds(&points[0]);
    for i in 0..points.len() {
        if i > 0 {
            let mid = (&points[i - 1] + &points[i]) / int(2);
            if holds(&mid) != initial {
                return Ok(Some(points[i - 1].clone()));
            }
        }
        if holds(&points[i]) != initial {
            return Ok(Some(points[i].clone()));
        }
    }
    Ok(None)
}

/// Sum of an iterator of expressions on a shared domain.
pub fn sum<'a, I>(exprs: I, domain: &Domain) -> Result<CostExpr, CostError>
where
    I: IntoIterator<Item = &'a CostExpr>,
{
    exprs
        .into_iter()
        .try_fold(CostExpr::zero(domain.clone()), |acc, e| acc.add(e))
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

pub fn one() -> Rational {
    Rational::one()
}
