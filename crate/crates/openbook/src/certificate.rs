//! Certificates: the serializable record of an analysis run.
//!
//! Rationals are serialized as `p/q` strings and big integers as decimal
//! strings once they leave the safe double range, so certificates replay to
//! identical bytes under the same configuration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::fdtc::{CertMethod, FdtcCertificate, FdtcConfig, FdtcValue, VeerVerdict};
use crate::mapping::{GrowthReport, GrowthVerdict};
use crate::surface::{BasedArc, Triangulation};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Certificate {
    pub schema: u64,
    pub tool_version: String,
    pub subject: String,
    pub config: ConfigRecord,
    pub boundaries: Vec<BoundaryRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthRecord>,
    pub constraints: ConstraintRecord,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConfigRecord {
    pub denom_bound: u64,
    pub max_iter: usize,
    pub search_depth: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundaryRecord {
    pub component: usize,
    pub fdtc: ValueRecord,
    pub method: String,
    pub brackets: Vec<(u64, IntText)>,
    pub veering: String,
    pub veering_witnessed: bool,
    pub witnesses: Vec<ArcRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum ValueRecord {
    #[serde(rename = "exact")]
    Exact { value: String },
    #[serde(rename = "interval")]
    Interval { lo: String, hi: String },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ArcRecord {
    pub base: usize,
    pub departure_corner: usize,
    pub edges: Vec<String>,
    pub arrival_corner: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GrowthRecord {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_hat: Option<f64>,
    pub intersections: Vec<IntText>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConstraintRecord {
    /// `c` is zero or of the form 1/r.
    pub value_zero_or_reciprocal: bool,
    /// |c| is at most one half.
    pub abs_at_most_half: bool,
    /// When growth evidence says pseudo-Anosov, 2 <= |r| <= 4g-2.
    pub kazez_roberts_window: Option<WindowRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WindowRecord {
    pub r: IntText,
    pub lo: u64,
    pub hi: u64,
    pub ok: bool,
}

/// A big integer rendered as a JSON number while it fits in the exact double
/// range, and as a decimal string beyond that.
#[derive(Clone, Debug, PartialEq)]
pub struct IntText(pub BigInt);

impl Serialize for IntText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= (1i64 << 53) - 1 => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for IntText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|x| IntText(BigInt::from(x)))
                .ok_or_else(|| serde::de::Error::custom("integer out of range")),
            serde_json::Value::String(s) => s
                .parse::<BigInt>()
                .map(IntText)
                .map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom("expected integer or string")),
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn render_value(v: &FdtcValue) -> ValueRecord {
    match v {
        FdtcValue::Exact(r) => ValueRecord::Exact {
            value: format_rational(r),
        },
        FdtcValue::Indeterminate { lo, hi } => ValueRecord::Interval {
            lo: format_rational(lo),
            hi: format_rational(hi),
        },
    }
}

pub fn render_method(m: &CertMethod) -> String {
    match m {
        CertMethod::Periodic { n, k } => format!("periodic:m^{n}=T^{k}"),
        CertMethod::Pinched => "brackets-pinched".into(),
        CertMethod::Witnesses { p, q } => format!("witnesses:c(m^{q}T^-{p})=0"),
        CertMethod::Isolated => "denominator-isolated".into(),
        CertMethod::Indeterminate => "indeterminate".into(),
    }
}

pub fn render_veer(v: VeerVerdict) -> String {
    match v {
        VeerVerdict::Right => "right".into(),
        VeerVerdict::Left => "left".into(),
        VeerVerdict::Neither => "neither".into(),
    }
}

pub fn render_arc(t: &Triangulation, a: &BasedArc) -> ArcRecord {
    ArcRecord {
        base: a.base,
        departure_corner: a.dep,
        edges: a
            .word
            .iter()
            .map(|&s| t.edge_name(t.edge_of(s)).to_string())
            .collect(),
        arrival_corner: a.arr,
    }
}

pub fn render_growth(g: &GrowthReport) -> GrowthRecord {
    GrowthRecord {
        verdict: match g.verdict {
            GrowthVerdict::Exponential => "exponential".into(),
            GrowthVerdict::NotExponential => "not-exponential".into(),
            GrowthVerdict::Inconclusive => "inconclusive".into(),
        },
        lambda_hat: g.lambda_hat,
        intersections: g
            .intersections
            .iter()
            .map(|v| IntText(BigInt::from(v.clone())))
            .collect(),
    }
}

/// Recomputes the theorem-side constraints from a certificate value.
pub fn constraints_for(value: &FdtcValue, genus: usize, pa_evidenced: bool) -> ConstraintRecord {
    let (zero_or_recip, at_most_half, window) = match value {
        FdtcValue::Indeterminate { .. } => (false, false, None),
        FdtcValue::Exact(v) => {
            let zero = v.is_zero();
            let recip = !zero && v.numer().abs().is_one();
            let half = BigRational::new(1.into(), 2.into());
            let small = v.abs() <= half;
            let window = if pa_evidenced && !zero && recip {
                let r = v.denom() * v.numer().signum();
                let lo = 2u64;
                let hi = (4 * genus as u64).saturating_sub(2);
                let rabs = r.abs().to_u64().unwrap_or(u64::MAX);
                Some(WindowRecord {
                    ok: rabs >= lo && rabs <= hi,
                    r: IntText(r),
                    lo,
                    hi,
                })
            } else {
                None
            };
            (zero || recip, small, window)
        }
    };
    ConstraintRecord {
        value_zero_or_reciprocal: zero_or_recip,
        abs_at_most_half: at_most_half,
        kazez_roberts_window: window,
    }
}

/// Assembles a certificate for one boundary analysis.
pub fn build_certificate(
    t: &Triangulation,
    subject: String,
    cfg: &FdtcConfig,
    fdtc_cert: &FdtcCertificate,
    growth: Option<&GrowthReport>,
    genus: usize,
) -> Certificate {
    let pa = growth
        .map(|g| g.verdict == GrowthVerdict::Exponential)
        .unwrap_or(false);
    Certificate {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        subject,
        config: ConfigRecord {
            denom_bound: cfg.denom_bound,
            max_iter: cfg.max_iter,
            search_depth: cfg.search_depth,
            seed: cfg.seed,
        },
        boundaries: vec![BoundaryRecord {
            component: fdtc_cert.boundary,
            fdtc: render_value(&fdtc_cert.value),
            method: render_method(&fdtc_cert.method),
            brackets: fdtc_cert
                .brackets
                .iter()
                .map(|(n, k)| (*n, IntText(k.clone())))
                .collect(),
            veering: render_veer(fdtc_cert.veering),
            veering_witnessed: fdtc_cert.veering_witnessed,
            witnesses: fdtc_cert
                .witnesses
                .iter()
                .map(|a| render_arc(t, a))
                .collect(),
        }],
        growth: growth.map(render_growth),
        constraints: constraints_for(&fdtc_cert.value, genus, pa),
    }
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Checks that the stored constraint booleans match a recomputation from
    /// the stored value.
    pub fn internally_consistent(&self, genus: usize) -> bool {
        let Some(b) = self.boundaries.first() else {
            return false;
        };
        let value = match &b.fdtc {
            ValueRecord::Exact { value } => {
                let Some(v) = parse_rational(value) else {
                    return false;
                };
                FdtcValue::Exact(v)
            }
            ValueRecord::Interval { lo, hi } => {
                let (Some(lo), Some(hi)) = (parse_rational(lo), parse_rational(hi)) else {
                    return false;
                };
                FdtcValue::Indeterminate { lo, hi }
            }
        };
        let pa = self
            .growth
            .as_ref()
            .map(|g| g.verdict == "exponential")
            .unwrap_or(false);
        constraints_for(&value, genus, pa) == self.constraints
    }
}

pub fn parse_rational(text: &str) -> Option<BigRational> {
    let (p, q) = text.split_once('/')?;
    Some(BigRational::new(p.parse().ok()?, q.parse().ok()?))
}
