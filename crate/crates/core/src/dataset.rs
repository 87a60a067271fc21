//! On-disk dataset format: one JSON document per Lagrangian.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::Cochain;
use crate::error::Error;
use crate::gysin::TwistTerm;
use crate::pearl::{PearlComplex, PearlData};
use crate::quantum::{DiskCount, ModuleActionData, ProductData};

pub const SCHEMA_VERSION: u32 = 1;

/// A generator with the exponents of its coefficient, e.g. `M t^-1 + M t` is
/// `{ "id": "M", "exponents": [-1, 1] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTerm {
    pub id: String,
    pub exponents: Vec<i64>,
}

pub fn cochain_from_terms(complex: &PearlComplex, terms: &[ClassTerm]) -> Result<Cochain, Error> {
    let mut c = Cochain::zero();
    for t in terms {
        let g = complex.find(&t.id)?;
        for &e in &t.exponents {
            c.add_monomial(g, e);
        }
    }
    Ok(c)
}

pub fn terms_from_cochain(complex: &PearlComplex, c: &Cochain) -> Vec<ClassTerm> {
    c.terms().map(|(g, a)| ClassTerm { id: complex.id(g).to_string(), exponents: a.exponents().collect() }).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectations {
    /// `dim QH^k(L)` for k in `[0, N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology_dims: Option<Vec<usize>>,
    /// `dim QH^k(Γ)` for k in `[0, N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_dims: Option<Vec<usize>>,
    /// `dim H^k(Γ)` of the t = 0 sequence, from the lowest index upward.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical_gamma_dims: Option<Vec<usize>>,
    /// A representative of `e_F`; compared as a class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_class: Option<Vec<ClassTerm>>,
    /// A representative of `e'_F` over the ambient ring, in q-exponents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_euler_class: Option<Vec<ClassTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_gamma_vanishes: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub schema_version: u32,
    pub pearl: PearlData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<Vec<TwistTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<ProductData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_action: Option<ModuleActionData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk_counts: Option<Vec<DiskCount>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<Expectations>,
}

impl DatasetFile {
    pub fn new(pearl: PearlData) -> Self {
        DatasetFile {
            schema_version: SCHEMA_VERSION,
            pearl,
            twist: None,
            product: None,
            module_action: None,
            disk_counts: None,
            expectations: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let file: DatasetFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        if file.pearl.n == 0 {
            return Err(Error::Schema("pearl.N must be positive".into()));
        }
        Ok(file)
    }

    /// Pretty JSON with two-space indentation and a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dataset serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, Error> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), Error> {
        let path = path.as_ref();
        fs::write(path, self.to_canonical_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// The unit ids, from the pearl data or else from the product data.
    pub fn unit_ids(&self) -> Option<&Vec<String>> {
        self.pearl.unit.as_ref().or_else(|| self.product.as_ref().and_then(|p| p.unit.as_ref()))
    }

    pub fn twist_terms(&self) -> &[TwistTerm] {
        self.twist.as_deref().unwrap_or(&[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pearl::Generator;

    #[test]
    fn round_trip() {
        let mut d = DatasetFile::new(PearlData::new("S2", 4, vec![Generator::new("m", 0), Generator::new("M", 2)]));
        d.twist = Some(vec![TwistTerm::new("M", "m", 0)]);
        d.expectations = Some(Expectations { expect_gamma_vanishes: Some(false), ..Default::default() });
        let text = d.to_canonical_json();
        assert!(text.contains("\"N\": 4"));
        assert!(text.ends_with("}\n"));
        let back = DatasetFile::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_canonical_json(), text);
    }

    #[test]
    fn schema_errors_carry_positions() {
        let err = DatasetFile::from_json("{\n  \"schema_version\": 1,\n  \"pearl\": 3\n}").unwrap_err();
        assert!(matches!(err, Error::Schema(ref m) if m.contains("line 3")));
        let err = DatasetFile::from_json(r#"{"schema_version": 7, "pearl": {"name": "x", "N": 2, "generators": []}}"#);
        assert!(matches!(err, Err(Error::Schema(_))));
    }
}
