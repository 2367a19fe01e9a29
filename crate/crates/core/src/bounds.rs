//! Closed-form bounds for adaptive and non-adaptive search.
//!
//! Real-valued bounds carry their exact form (a rational, or a closed-form
//! expression over integers when irrational) next to an `f64`. Every number is
//! tagged with the result it comes from; bounds outside their hypotheses are
//! omitted from the report.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::gaussian::gaussian_binomial;

/// Which result a number comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    /// Counting: each answer is one bit.
    InformationTheoretic,
    /// Hyperplane-only inductive strategy.
    InductiveStrategy,
    /// Katona's separating-system bound with the largest useful query size.
    KatonaSubstitution,
    /// The same bound after simplifying the substitution.
    KatonaSimplified,
    /// Coordinate hyperplanes plus two-coordinate hyperplanes.
    ExplicitConstruction,
    /// 2n random pencils, q hyperplanes each.
    RandomPencils,
    /// Semi-resolving set lower bound in the plane.
    SemiResolving,
    /// Double blocking set bound for q ≥ 9.
    DoubleBlockingSquare,
    /// Double blocking set bound for primes q > 3.
    DoubleBlockingPrime,
    /// Double blocking set bound for odd non-square powers.
    DoubleBlockingOddPower,
    /// Counting bound 2(q + 1).
    DoubleBlockingTrivial,
    /// Double blocking set construction for q = r^d, d odd ≥ 3.
    DoubleBlockingConstruction,
    /// Exact plane value for square q ≥ 121.
    ExactSquarePlane,
}

/// Exact value of a real bound.
#[derive(Clone, Debug, PartialEq)]
pub enum Exact {
    Rational(Ratio<i64>),
    /// Closed form over integers, e.g. `log2(13)`.
    Expr(String),
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exact::Rational(r) => s.serialize_str(&r.to_string()),
            Exact::Expr(e) => s.serialize_str(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Real {
    pub exact: Exact,
    pub approx: f64,
    pub tag: Tag,
}

impl Real {
    fn rational(r: Ratio<i64>, tag: Tag) -> Self {
        Real { approx: *r.numer() as f64 / *r.denom() as f64, exact: Exact::Rational(r), tag }
    }

    fn expr(e: String, approx: f64, tag: Tag) -> Self {
        Real { exact: Exact::Expr(e), approx, tag }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Int {
    #[serde(serialize_with = "as_string")]
    pub value: BigUint,
    pub tag: Tag,
}

fn as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl Int {
    fn new(value: impl Into<BigUint>, tag: Tag) -> Self {
        Int { value: value.into(), tag }
    }
}

/// `log2` of an arbitrary-size integer.
fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").log2() + shift as f64
}

/// Smallest `k` with `2^k ≥ x`, for `x ≥ 1`.
fn ceil_log2(x: &BigUint) -> u64 {
    if x <= &BigUint::from(1u32) {
        0
    } else {
        (x - 1u32).bits()
    }
}

fn check(n: usize, q: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} is below 2")));
    }
    prime_power(q).ok_or(Error::NotAPrimePower(q))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptiveBounds {
    pub lower: Real,
    /// `lower` rounded up; a valid integer lower bound on a query count.
    pub lower_ceil: u64,
    pub upper: Int,
}

/// Bracket for the adaptive query count: `log2 [n,1]_q` and
/// `(q-1)(n-1) + 1`.
pub fn adaptive_bounds(n: usize, q: u64) -> Result<AdaptiveBounds> {
    check(n, q)?;
    let points = gaussian_binomial(n as i64, 1, q);
    Ok(AdaptiveBounds {
        lower: Real::expr(format!("log2({points})"), log2_big(&points), Tag::InformationTheoretic),
        lower_ceil: ceil_log2(&points),
        upper: Int::new(BigUint::from(q - 1) * (n - 1) + 1u32, Tag::InductiveStrategy),
    })
}

/// The two forms of Katona's lower bound with query size `m = [n-1,1]_q` out
/// of `M = [n,1]_q` points.
pub fn katona_lower(n: usize, q: u64) -> Result<(Real, Real)> {
    check(n, q)?;
    let big_m = gaussian_binomial(n as i64, 1, q);
    let m = gaussian_binomial(n as i64 - 1, 1, q);
    let (lm, lsm) = (log2_big(&big_m), log2_big(&m));
    let ratio = (lm - lsm).exp2();
    // log2(e M / m) = log2 e + log2 M - log2 m
    let sub = lm / (std::f64::consts::LOG2_E + lm - lsm) * ratio;
    let substitution =
        Real::expr(format!("log2({big_m}) / log2(e*{big_m}/{m}) * {big_m}/{m}"), sub, Tag::KatonaSubstitution);

    let qn = BigUint::from(q).pow(n as u32) - 1u32;
    let qn1 = BigUint::from(q).pow(n as u32 - 1) - 1u32;
    let lq = (q as f64).log2();
    let simp = (n - 1) as f64 * q as f64 * lq / (2.0 + log2_big(&qn) - log2_big(&qn1));
    let simplified =
        Real::expr(format!("{}*{q}*log2({q}) / (2 + log2({qn}/{qn1}))", n - 1), simp, Tag::KatonaSimplified);
    Ok((substitution, simplified))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonAdaptiveBounds {
    pub lower_katona: Real,
    pub lower_simplified: Real,
    pub upper_explicit: Int,
    pub upper_random: Int,
    /// The smaller upper bound.
    pub upper: Int,
}

pub fn nonadaptive_bounds(n: usize, q: u64) -> Result<NonAdaptiveBounds> {
    let (lower_katona, lower_simplified) = katona_lower(n, q)?;
    let pairs = BigUint::from(n * (n - 1) / 2);
    let upper_explicit = Int::new(BigUint::from(n) + pairs * (q - 2), Tag::ExplicitConstruction);
    let upper_random = Int::new(BigUint::from(2 * n as u64) * q, Tag::RandomPencils);
    let upper = if upper_explicit.value <= upper_random.value { upper_explicit.clone() } else { upper_random.clone() };
    Ok(NonAdaptiveBounds { lower_katona, lower_simplified, upper_explicit, upper_random, upper })
}

/// Bounds specific to the plane (`n = 3`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneSpecials {
    /// Semi-resolving lower bound `min{2q + q/4 - 3, τ₂ - 2}` using
    /// `tau2_lower`; needs `q ≥ 3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ht_lower: Option<Real>,
    /// Best applicable lower bound on the double blocking number τ₂.
    pub tau2_lower: Real,
    /// Every applicable τ₂ lower bound.
    pub tau2_candidates: Vec<Real>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau2_upper: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_m3q: Option<Int>,
}

/// Integer square root, if `q` is a perfect square.
fn exact_sqrt(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}

fn tau2_candidates(q: u64) -> Result<Vec<Real>> {
    let (p, e) = prime_power(q).ok_or(Error::NotAPrimePower(q))?;
    let qf = q as f64;
    let mut out = vec![Real::rational(Ratio::from_integer(2 * (q as i64 + 1)), Tag::DoubleBlockingTrivial)];
    if q >= 9 {
        let b = match exact_sqrt(q) {
            Some(r) => Real::rational(Ratio::from_integer(2 * (q + r + 1) as i64), Tag::DoubleBlockingSquare),
            None => {
                Real::expr(format!("2*({q} + sqrt({q}) + 1)"), 2.0 * (qf + qf.sqrt() + 1.0), Tag::DoubleBlockingSquare)
            }
        };
        out.push(b);
    }
    if e == 1 && q > 3 {
        out.push(Real::rational(Ratio::new(5 * (q as i64 + 1), 2), Tag::DoubleBlockingPrime));
    }
    if e >= 3 && e % 2 == 1 {
        let small = p == 2 || p == 3;
        let c = if small { 2f64.powf(-1.0 / 3.0) } else { 1.0 };
        let c_text = if small { "2^(-1/3)" } else { "1" };
        out.push(Real::expr(
            format!("2*({q} + 1) + {c_text}*{q}^(2/3)"),
            2.0 * (qf + 1.0) + c * qf.powf(2.0 / 3.0),
            Tag::DoubleBlockingOddPower,
        ));
    }
    Ok(out)
}

/// Upper bound on τ₂ for `q = r^d` with `r` an odd prime power and `d` odd
/// and at least 3; the largest such `d` gives the smallest bound.
fn tau2_upper(q: u64) -> Option<Int> {
    let (p, e) = prime_power(q)?;
    if p == 2 {
        return None;
    }
    let d = (3..=e).rev().find(|d| d % 2 == 1 && e % d == 0)?;
    let r = p.pow(e / d);
    let num = q - 1;
    // 2(q-1)/(r-1) is an integer: r - 1 divides r^d - 1.
    Some(Int::new(2 * q + 2 * num / (r - 1), Tag::DoubleBlockingConstruction))
}

pub fn n3_specials(q: u64) -> Result<PlaneSpecials> {
    let candidates = tau2_candidates(q)?;
    let best =
        candidates.iter().max_by(|a, b| a.approx.total_cmp(&b.approx)).expect("trivial bound always applies").clone();
    let ht_lower = (q >= 3).then(|| {
        let ht = Ratio::new(9 * q as i64 - 12, 4);
        let ht_f = *ht.numer() as f64 / *ht.denom() as f64;
        if ht_f <= best.approx - 2.0 {
            Real::rational(ht, Tag::SemiResolving)
        } else {
            match &best.exact {
                Exact::Rational(r) => Real::rational(r - 2, Tag::SemiResolving),
                Exact::Expr(e) => Real::expr(format!("{e} - 2"), best.approx - 2.0, Tag::SemiResolving),
            }
        }
    });
    let exact_m3q = match exact_sqrt(q) {
        Some(r) if q >= 121 => Some(Int::new(2 * q + 2 * r, Tag::ExactSquarePlane)),
        _ => None,
    };
    Ok(PlaneSpecials { ht_lower, tau2_lower: best, tau2_candidates: candidates, tau2_upper: tau2_upper(q), exact_m3q })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub q: u64,
    pub adaptive: AdaptiveBounds,
    pub nonadaptive: NonAdaptiveBounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneSpecials>,
}

pub fn bounds_report(n: usize, q: u64) -> Result<BoundsReport> {
    let adaptive = adaptive_bounds(n, q)?;
    let nonadaptive = nonadaptive_bounds(n, q)?;
    let plane = if n == 3 { Some(n3_specials(q)?) } else { None };
    Ok(BoundsReport { n, q, adaptive, nonadaptive, plane })
}

/// CSV columns of [`BoundsReport::csv_row`], in order.
pub const CSV_COLUMNS: [&str; 14] = [
    "n",
    "q",
    "adaptive_lower",
    "adaptive_lower_ceil",
    "adaptive_upper",
    "katona_lower",
    "katona_simplified",
    "nonadaptive_upper_explicit",
    "nonadaptive_upper_random",
    "nonadaptive_upper",
    "ht_lower",
    "tau2_lower",
    "tau2_lower_tag",
    "exact_m3q",
];

fn tag_name(t: Tag) -> String {
    serde_json::to_value(t).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

impl BoundsReport {
    /// Values in [`CSV_COLUMNS`] order; absent plane values are empty and
    /// reals are printed with six decimals.
    pub fn csv_row(&self) -> Vec<String> {
        let f = |r: &Real| format!("{:.6}", r.approx);
        let plane = self.plane.as_ref();
        vec![
            self.n.to_string(),
            self.q.to_string(),
            f(&self.adaptive.lower),
            self.adaptive.lower_ceil.to_string(),
            self.adaptive.upper.value.to_string(),
            f(&self.nonadaptive.lower_katona),
            f(&self.nonadaptive.lower_simplified),
            self.nonadaptive.upper_explicit.value.to_string(),
            self.nonadaptive.upper_random.value.to_string(),
            self.nonadaptive.upper.value.to_string(),
            plane.and_then(|p| p.ht_lower.as_ref()).map(f).unwrap_or_default(),
            plane.map(|p| f(&p.tau2_lower)).unwrap_or_default(),
            plane.map(|p| tag_name(p.tau2_lower.tag)).unwrap_or_default(),
            plane.and_then(|p| p.exact_m3q.as_ref()).map(|v| v.value.to_string()).unwrap_or_default(),
        ]
    }
}

impl BoundsReport {
    /// Whether each bracket is ordered. Used as a self-check by callers.
    pub fn is_ordered(&self) -> bool {
        let up_a = self.adaptive.upper.value.to_f64().unwrap_or(f64::INFINITY);
        let up_m = self.nonadaptive.upper.value.to_f64().unwrap_or(f64::INFINITY);
        let mut ok = self.adaptive.lower.approx <= up_a
            && self.nonadaptive.lower_katona.approx <= up_m
            && self.nonadaptive.lower_simplified.approx <= up_m;
        if let Some(p) = &self.plane {
            if let Some(h) = &p.ht_lower {
                ok &= h.approx <= up_m;
            }
            if let Some(e) = &p.exact_m3q {
                ok &= e.value.to_f64().unwrap_or(0.0) <= up_m;
            }
            if let Some(u) = &p.tau2_upper {
                ok &= p.tau2_lower.approx <= u.value.to_f64().unwrap_or(f64::INFINITY);
            }
        }
        ok && !self.adaptive.upper.value.is_zero()
    }
}
