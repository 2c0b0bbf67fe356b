//! Machine-readable reports.
//!
//! Exact values are emitted as strings (`"num/den"`, `"a+bi/√2^s"`), floats
//! as JSON numbers with 17 significant digits.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::arith::{render_rational, Backend, CoinMatrix, Real, RealSqrt2, Scalar};
use crate::engine::{Distribution, WalkState};
use crate::moments::{LimitMoment, LinearForm};
use crate::pascal::XiDecomposition;

/// A real value in its report encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num {
    text: String,
    float: bool,
}

impl Num {
    pub fn of<R: Real>(value: &R) -> Self {
        Self { text: value.render(), float: R::FLOAT }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.float {
            match RawValue::from_string(self.text.clone()) {
                Ok(raw) => raw.serialize(serializer),
                // non-finite floats have no JSON number form
                Err(_) => serializer.serialize_str(&self.text),
            }
        } else {
            serializer.serialize_str(&self.text)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SiteRow {
    pub k: i64,
    #[serde(rename = "pL")]
    pub p_left: Num,
    #[serde(rename = "pR")]
    pub p_right: Num,
    pub p: Num,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributionReport {
    pub n: u64,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    pub total: Num,
    pub expectation: Num,
    pub sites: Vec<SiteRow>,
}

impl DistributionReport {
    pub fn new<R: Real>(dist: &Distribution<R>, backend: Backend) -> Self {
        let sites = dist
            .iter()
            .map(|(k, p)| {
                let [l, r] = dist.components(k).expect("site present");
                SiteRow { k, p_left: Num::of(l), p_right: Num::of(r), p: Num::of(&p) }
            })
            .collect();
        Self {
            n: dist.time(),
            backend,
            phi: None,
            total: Num::of(&dist.total()),
            expectation: Num::of(&dist.expectation()),
            sites,
        }
    }

    pub fn with_phi(mut self, phi: String) -> Self {
        self.phi = Some(phi);
        self
    }

    /// Columns `k,p`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,p\n");
        for row in &self.sites {
            let _ = writeln!(out, "{},{}", row.k, row.p.as_str());
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeRow {
    pub k: i64,
    #[serde(rename = "psiL")]
    pub psi_left: String,
    #[serde(rename = "psiR")]
    pub psi_right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkStateReport {
    pub n: u64,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<u64>,
    pub sites: Vec<AmplitudeRow>,
}

impl WalkStateReport {
    pub fn new<S: Scalar>(state: &WalkState<S>) -> Self {
        let sites = state
            .sites()
            .map(|(k, [l, r])| AmplitudeRow { k, psi_left: l.render(), psi_right: r.render() })
            .collect();
        Self { n: state.time(), backend: S::BACKEND, cycle: state.cycle(), sites }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct XiReport {
    pub l: u32,
    pub m: u32,
    pub p: String,
    pub q: String,
    pub r: String,
    pub s: String,
    pub matrix: [[String; 2]; 2],
    /// `"0"` when the closed form equals the enumerated sum, the difference
    /// matrix otherwise, `null` above the enumeration cap.
    pub oracle_diff: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

impl XiReport {
    pub fn new(xi: &XiDecomposition, oracle: Option<&CoinMatrix>, notice: Option<String>) -> Self {
        let matrix = xi.to_matrix();
        let oracle_diff = oracle.map(|o| {
            let d = &matrix - o;
            if d.is_zero() {
                "0".to_string()
            } else {
                d.to_string()
            }
        });
        Self {
            l: xi.l,
            m: xi.m,
            p: xi.p().render(),
            q: xi.q().render(),
            r: xi.r().render(),
            s: xi.s().render(),
            matrix: matrix.rendered(),
            oracle_diff,
            notice,
        }
    }

    pub fn oracle_agrees(&self) -> Option<bool> {
        self.oracle_diff.as_deref().map(|d| d == "0")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRow {
    pub n: u32,
    pub a: String,
    pub b: String,
}

impl From<&LinearForm> for CoefficientRow {
    fn from(f: &LinearForm) -> Self {
        Self { n: f.n, a: render_rational(&f.a), b: render_rational(&f.b) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactSqrt2 {
    pub r0: String,
    pub r1: String,
}

impl From<&RealSqrt2> for ExactSqrt2 {
    fn from(v: &RealSqrt2) -> Self {
        Self { r0: render_rational(&v.r0()), r1: render_rational(&v.r1()) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    pub m: u32,
    pub exact: ExactSqrt2,
    pub float: Num,
    /// Absent for odd orders.
    pub quadrature: Option<Num>,
}

impl MomentRow {
    pub fn new(moment: &LimitMoment, quadrature: Option<f64>) -> Self {
        Self {
            m: moment.order,
            exact: ExactSqrt2::from(&moment.value),
            float: Num::of(&moment.to_f64()),
            quadrature: quadrature.as_ref().map(Num::of),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DyadicGaussian;
    use crate::engine::{distribution, evolve, QubitState};
    use crate::moments::limit_moment;
    use crate::pascal::{xi_closed_decomposition, xi_oracle};

    #[test]
    fn exact_distribution_json() {
        let dist = distribution(&evolve(&QubitState::<DyadicGaussian>::left(), 1));
        let v = serde_json::to_value(DistributionReport::new(&dist, Backend::Exact)).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["backend"], "exact");
        assert_eq!(v["sites"][0]["k"], -1);
        assert_eq!(v["sites"][0]["pL"], "1/2");
        assert_eq!(v["sites"][0]["pR"], "0/1");
        assert_eq!(v["expectation"], "0/1");
    }

    #[test]
    fn float_values_are_numbers() {
        let phi = QubitState::<DyadicGaussian>::left().to_float();
        let dist = distribution(&evolve(&phi, 3));
        let report = DistributionReport::new(&dist, Backend::Float);
        let text = serde_json::to_string(&report).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((v["sites"][1]["p"].as_f64().unwrap() - 0.625).abs() < 1e-15);
        assert!(text.contains("\"pR\":0.0000000000000000e0"), "{text}");
        let csv = report.to_csv();
        assert!(csv.starts_with("k,p\n-3,"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn xi_report_fields() {
        let xi = xi_closed_decomposition(3, 1).unwrap();
        let r = XiReport::new(&xi, Some(&xi_oracle(3, 1).unwrap()), None);
        assert_eq!(r.oracle_agrees(), Some(true));
        assert_eq!(r.p, DyadicGaussian::new(2, 0, 3).render());
        let v = serde_json::to_value(&r).unwrap();
        for key in ["l", "m", "p", "q", "r", "s", "matrix", "oracle_diff"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn moment_row_fields() {
        let row = MomentRow::new(&limit_moment(2), Some(0.25));
        let v = serde_json::to_value(&row).unwrap();
        assert_eq!(v["exact"]["r0"], "1/1");
        assert_eq!(v["exact"]["r1"], "-1/2");
        assert!(v["float"].is_f64());
    }
}
