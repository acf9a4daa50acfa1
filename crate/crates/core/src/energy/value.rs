use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::nonarch::CaseTag;
use crate::arith::{LogInterval, LogSum, Place};

/// A local energy value in one of three precisions.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyValue {
    Exact(LogSum),
    Interval(LogInterval),
    MonteCarlo { value: f64, std_error: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalEnergy {
    pub place: Place,
    pub value: EnergyValue,
    pub case_tag: CaseTag,
    /// Name of the S3 element used to reach the normal form, when one was applied.
    pub normalized_by: Option<&'static str>,
}

impl LocalEnergy {
    pub fn exact(place: Place, v: LogSum, case_tag: CaseTag) -> Self {
        LocalEnergy { place, value: EnergyValue::Exact(v), case_tag, normalized_by: None }
    }

    /// Point value: the exact value, the interval midpoint or the Monte-Carlo mean.
    pub fn value_f64(&self) -> f64 {
        let (lo, hi) = self.bounds();
        (lo + hi) / 2.0
    }

    /// Certified bounds; a Monte-Carlo value has lo = hi = mean.
    pub fn bounds(&self) -> (f64, f64) {
        match &self.value {
            EnergyValue::Exact(s) => (s.to_f64(), s.to_f64()),
            EnergyValue::Interval(iv) => (iv.lo_f64(), iv.hi_f64()),
            EnergyValue::MonteCarlo { value, .. } => (*value, *value),
        }
    }

    pub fn std_error(&self) -> f64 {
        match &self.value {
            EnergyValue::MonteCarlo { std_error, .. } => *std_error,
            _ => 0.0,
        }
    }
}

impl Serialize for LocalEnergy {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LocalEnergy", 8)?;
        st.serialize_field("place", &self.place)?;
        st.serialize_field("case", &self.case_tag)?;
        st.serialize_field("normalized_by", &self.normalized_by)?;
        match &self.value {
            EnergyValue::Exact(v) => {
                st.serialize_field("kind", "exact")?;
                st.serialize_field("exact", v)?;
                st.serialize_field("value", &v.to_f64())?;
            }
            EnergyValue::Interval(iv) => {
                st.serialize_field("kind", "interval")?;
                st.serialize_field("log_units", &format!("[{}, {}] log {}", iv.lo, iv.hi, iv.prime))?;
                st.serialize_field("lo", &iv.lo_f64())?;
                st.serialize_field("hi", &iv.hi_f64())?;
            }
            EnergyValue::MonteCarlo { value, std_error } => {
                st.serialize_field("kind", "monte-carlo")?;
                st.serialize_field("value", value)?;
                st.serialize_field("std_error", std_error)?;
            }
        }
        st.end()
    }
}
