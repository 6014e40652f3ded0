//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Serializes non-finite floats as the strings `"inf"`, `"-inf"` and `"nan"`
/// (JSON has no literal for them).
pub mod float {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Tag(String),
    }

    pub fn to_repr(x: f64) -> serde_json::Value {
        if x.is_finite() {
            serde_json::json!(x)
        } else if x.is_nan() {
            serde_json::json!("nan")
        } else if x > 0.0 {
            serde_json::json!("inf")
        } else {
            serde_json::json!("-inf")
        }
    }

    fn from_repr<E: serde::de::Error>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Number(x) => Ok(x),
            Repr::Tag(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("invalid float tag {other:?}"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        to_repr(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            xs.iter()
                .map(|&x| to_repr(x))
                .collect::<Vec<_>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Vec::<Repr>::deserialize(d)?
                .into_iter()
                .map(from_repr)
                .collect()
        }
    }

    pub mod map {
        use super::*;

        pub fn serialize<S: Serializer>(
            m: &BTreeMap<String, f64>,
            s: S,
        ) -> Result<S::Ok, S::Error> {
            m.iter()
                .map(|(k, &v)| (k.clone(), to_repr(v)))
                .collect::<BTreeMap<_, _>>()
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<BTreeMap<String, f64>, D::Error> {
            BTreeMap::<String, Repr>::deserialize(d)?
                .into_iter()
                .map(|(k, v)| from_repr(v).map(|x| (k, x)))
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub description: String,
    pub seed: u64,
}

/// One row of a per-direction comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionRecord {
    #[serde(with = "float")]
    pub theta: f64,
    #[serde(rename = "target_support", with = "float")]
    pub target: f64,
    #[serde(rename = "achieved_support", with = "float")]
    pub achieved: f64,
    #[serde(with = "float")]
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem_id: String,
    pub instance: Instance,
    pub per_direction: Vec<DirectionRecord>,
    #[serde(with = "float")]
    pub hausdorff: f64,
    #[serde(with = "float::vec")]
    pub residuals: Vec<f64>,
    pub passed: bool,
    pub runtime_ms: u64,
    /// Named scalar summaries (e.g. the smallest sampled `β_U`).
    #[serde(default, with = "float::map")]
    pub metrics: BTreeMap<String, f64>,
    /// Human-readable notes on failed checks and caveats.
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl VerifyReport {
    pub fn new(theorem_id: &str, description: impl Into<String>, seed: u64) -> Self {
        Self {
            theorem_id: theorem_id.to_string(),
            instance: Instance {
                description: description.into(),
                seed,
            },
            per_direction: Vec::new(),
            hausdorff: 0.0,
            residuals: Vec::new(),
            passed: false,
            runtime_ms: 0,
            metrics: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    /// Records a failed check; does not touch `passed`.
    pub fn note(&mut self, message: impl Into<String>) {
        self.diagnostics.push(message.into());
    }

    pub fn max_gap(&self) -> f64 {
        self.per_direction
            .iter()
            .map(|r| r.gap)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_gap(&self) -> f64 {
        self.per_direction
            .iter()
            .map(|r| r.gap)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// Gap table `theta,target_support,achieved_support,gap` with 17
    /// significant digits.
    pub fn gap_table_csv(&self) -> String {
        let mut out = String::from("theta,target_support,achieved_support,gap\n");
        for r in &self.per_direction {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_sig17(r.theta),
                fmt_sig17(r.target),
                fmt_sig17(r.achieved),
                fmt_sig17(r.gap)
            );
        }
        out
    }
}

/// Formats with 17 significant digits; non-finite values become
/// `inf`, `-inf` or `nan`.
pub fn fmt_sig17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Runs `f` and returns its result with the elapsed wall time in
/// milliseconds.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed().as_millis() as u64)
}
