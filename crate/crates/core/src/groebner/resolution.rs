//! Minimal graded free resolutions by iterated syzygies.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ring::RingRef;

use super::module::FreeModuleMap;

/// `F_0 ← F_1 ← ... ← F_k ← 0`; `maps[i]` is `F_{i+1} → F_i`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ring: RingRef,
    /// Generator degrees of `F_0`.
    pub base_degrees: Vec<i64>,
    pub maps: Vec<FreeModuleMap>,
    /// False when the length cap was reached with a nonzero kernel left.
    pub complete: bool,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// Generator degrees of `F_i`.
    pub fn degrees(&self, i: usize) -> Vec<i64> {
        if i == 0 {
            return self.base_degrees.clone();
        }
        self.maps.get(i - 1).map(|m| m.source_degrees().to_vec()).unwrap_or_default()
    }

    pub fn betti_table(&self) -> BettiTable {
        let mut entries = Vec::new();
        for i in 0..=self.maps.len() {
            let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
            for d in self.degrees(i) {
                *counts.entry(d).or_default() += 1;
            }
            entries.push(counts.into_iter().collect());
        }
        BettiTable { entries }
    }
}

/// Graded Betti numbers: `entries[i]` lists `(degree, multiplicity)` of `F_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub entries: Vec<Vec<(i64, usize)>>,
}

impl BettiTable {
    pub fn rank(&self, i: usize) -> usize {
        self.entries.get(i).map_or(0, |e| e.iter().map(|(_, m)| m).sum())
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                let terms: Vec<String> = e
                    .iter()
                    .map(|(d, m)| if *m == 1 { format!("R({})", -d) } else { format!("R({})^{m}", -d) })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" <- "))
    }
}

/// Resolves the cokernel of `presentation` (which is minimalized first).
pub fn free_resolution(presentation: &FreeModuleMap) -> Result<FreeResolution> {
    let mut maps = Vec::new();
    let mut current = presentation.minimalize()?;
    let limit = presentation.ring().nvars() + 2;
    while current.source_rank() > 0 && maps.len() < limit {
        let next = current.kernel()?;
        maps.push(current);
        current = next;
    }
    Ok(FreeResolution {
        ring: presentation.ring().clone(),
        base_degrees: presentation.target_degrees().to_vec(),
        maps,
        complete: current.source_rank() == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::ring::Ring;
    use crate::scalar::Field;

    #[test]
    fn twisted_cubic() {
        let r = Ring::indexed("X", 4, Field::Rational);
        let g: Vec<_> = ["X0*X2-X1^2", "X0*X3-X1*X2", "X1*X3-X2^2"]
            .iter()
            .map(|s| parse_polynomial(&r, s).unwrap())
            .collect();
        let res = free_resolution(&FreeModuleMap::from_ideal(&r, &g).unwrap()).unwrap();
        let b = res.betti_table();
        assert_eq!(b.entries, vec![vec![(0, 1)], vec![(2, 3)], vec![(3, 2)]]);
        assert_eq!(b.to_string(), "R(0) <- R(-2)^3 <- R(-3)^2");
    }
}
