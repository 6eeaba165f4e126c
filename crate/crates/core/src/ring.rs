//! Polynomial ring descriptors.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::scalar::Field;

/// Per-variable grading. `Bigraded { split }` gives the first `split`
/// variables degree (1,0) and the rest degree (0,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    Standard,
    Bigraded { split: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
    grading: Grading,
    field: Field,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S], field: Field) -> Result<RingRef> {
        Self::with_grading(names, field, Grading::Standard)
    }

    pub fn with_grading<S: AsRef<str>>(names: &[S], field: Field, grading: Grading) -> Result<RingRef> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || !seen.insert(n.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate or empty variable name {n:?}")));
            }
        }
        if let Grading::Bigraded { split } = grading {
            if split > names.len() {
                return Err(Error::InvalidArgument("bigrading split exceeds variable count".into()));
            }
        }
        Ok(Arc::new(Ring { names, grading, field }))
    }

    /// `prefix0 .. prefix{count-1}`.
    pub fn indexed(prefix: &str, count: usize, field: Field) -> RingRef {
        let names: Vec<String> = (0..count).map(|i| format!("{prefix}{i}")).collect();
        Self::new(&names, field).expect("indexed names are unique")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn bidegree(&self, m: &Monomial) -> (u32, u32) {
        match self.grading {
            Grading::Standard => (m.degree(), 0),
            Grading::Bigraded { split } => {
                let a = m.exps()[..split].iter().map(|&e| e as u32).sum();
                let b = m.exps()[split..].iter().map(|&e| e as u32).sum();
                (a, b)
            }
        }
    }

    /// Same variables over another field.
    pub fn with_field(&self, field: Field) -> RingRef {
        Arc::new(Ring { names: self.names.clone(), grading: self.grading, field })
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.names.join(","))
    }
}

pub(crate) fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_same(a: &RingRef, b: &RingRef) -> Result<()> {
    if same_ring(a, b) {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("{a} vs {b}")))
    }
}
