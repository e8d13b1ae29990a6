//! Certificates: explicit sums of relation instances in two-sided context.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::drinfeld::{DrinfeldAlgebra, RelationSpec};
use crate::error::{Error, Result};
use crate::freealg::{Element, Word};
use crate::scalar::Scalar;

/// What a certificate entry multiplies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "cites", rename_all = "kebab-case")]
pub enum Cited {
    Relation { spec: RelationSpec },
    /// A goal certified earlier in the same run.
    Goal { name: String },
}

/// `coeff · left · instance · right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertEntry {
    pub left: Word,
    pub coeff: Scalar,
    pub cited: Cited,
    pub right: Word,
}

impl CertEntry {
    pub fn relation(left: Word, coeff: Scalar, spec: RelationSpec, right: Word) -> Self {
        CertEntry { left, coeff, cited: Cited::Relation { spec }, right }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "left": self.left.to_string(),
            "coeff": self.coeff.to_string(),
            "cited": serde_json::to_value(&self.cited).expect("serializable"),
            "right": self.right.to_string(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub entries: Vec<CertEntry>,
}

impl Certificate {
    pub fn new() -> Self {
        Certificate::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, e: CertEntry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, o: Certificate) {
        self.entries.extend(o.entries);
    }

    /// Σ coeff · left · instance · right, rebuilding every instance from its parameters.
    pub fn resum(&self, alg: &DrinfeldAlgebra, goals: &dyn Fn(&str) -> Option<Element>) -> Result<Element> {
        let mut cache: HashMap<&RelationSpec, Arc<Element>> = HashMap::new();
        let mut out = Element::zero();
        for e in &self.entries {
            let inst = match &e.cited {
                Cited::Relation { spec } => match cache.get(spec) {
                    Some(el) => el.clone(),
                    None => {
                        let el = Arc::new(spec.build(alg)?.element);
                        cache.insert(spec, el.clone());
                        el
                    }
                },
                Cited::Goal { name } => {
                    Arc::new(goals(name).ok_or_else(|| Error::InvalidParams(format!("unknown goal `{name}`")))?)
                }
            };
            out.add_assign(&inst.sandwich(&e.left, &e.coeff, &e.right));
        }
        Ok(out)
    }

    /// Check that the entries sum to `expected` exactly.
    pub fn check(&self, alg: &DrinfeldAlgebra, expected: &Element) -> Result<bool> {
        Ok(self.resum(alg, &|_| None)? == *expected)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(CertEntry::to_json).collect())
    }
}
