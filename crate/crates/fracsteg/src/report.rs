//! Text and JSON renderings of a [`MetricsReport`].

use fracsteg_core::MetricsReport;
use serde::{Serialize, Serializer};

/// JSON shape. An infinite PSNR is written as the string `"inf"`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MetricsJson {
    #[serde(serialize_with = "decibels")]
    pub psnr_db: f64,
    pub mse: f64,
    pub xi: u8,
    pub uiqi: f64,
    pub image_fidelity: f64,
    pub relative_entropy: f64,
}

fn decibels<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

impl From<&MetricsReport> for MetricsJson {
    fn from(r: &MetricsReport) -> Self {
        Self {
            psnr_db: r.psnr,
            mse: r.mse,
            xi: r.peak,
            uiqi: r.uiqi,
            image_fidelity: r.image_fidelity,
            relative_entropy: r.relative_entropy,
        }
    }
}

pub fn to_json(report: &MetricsReport) -> String {
    serde_json::to_string_pretty(&MetricsJson::from(report)).expect("plain struct serializes")
}

/// `PSNR` value formatted the same way in every output.
pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() && db > 0.0 {
        "inf".to_owned()
    } else {
        format!("{db}")
    }
}

pub fn to_text(report: &MetricsReport) -> String {
    format!(
        "psnr_db: {}\nmse: {}\nxi: {}\nuiqi: {}\nimage_fidelity: {}\nrelative_entropy: {}\n",
        format_psnr(report.psnr),
        report.mse,
        report.peak,
        report.uiqi,
        report.image_fidelity,
        report.relative_entropy,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(psnr: f64) -> MetricsReport {
        MetricsReport {
            psnr,
            mse: 0.25,
            peak: 200,
            uiqi: 0.5,
            image_fidelity: 0.75,
            relative_entropy: 0.125,
        }
    }

    #[test]
    fn infinite_psnr_is_a_string() {
        let v: serde_json::Value = serde_json::from_str(&to_json(&report(f64::INFINITY))).unwrap();
        assert_eq!(v["psnr_db"], "inf");
        assert_eq!(v["xi"], 200);
        assert_eq!(v["relative_entropy"], 0.125);
    }

    #[test]
    fn finite_psnr_is_a_number() {
        let v: serde_json::Value = serde_json::from_str(&to_json(&report(41.5))).unwrap();
        assert_eq!(v["psnr_db"], 41.5);
        assert!(to_text(&report(41.5)).starts_with("psnr_db: 41.5\n"));
    }
}
