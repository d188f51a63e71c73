use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Switches that remove one model component each. All off is the full model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AblationFlags {
    /// Treat every fact as abstract, for weights and constraints alike.
    pub no_grouping: bool,
    /// Replace the overlap of every existing edge by 1.
    pub no_overlap: bool,
    /// Replace every relevance score by 1.
    pub no_relevance: bool,
    /// Drop the root, neighbor-chaining and edge-coupling constraints.
    pub no_chaining: bool,
    /// Drop the grounding-neighbor constraint.
    pub no_grounding_neighbor: bool,
    /// Use the sign-pattern parameters instead of tuned ones.
    pub no_tuning: bool,
}

const NAMES: [&str; 6] = [
    "no_grouping",
    "no_overlap",
    "no_relevance",
    "no_chaining",
    "no_grounding_neighbor",
    "no_tuning",
];

impl AblationFlags {
    pub fn none() -> Self {
        Self::default()
    }

    fn bits(&self) -> [bool; 6] {
        [
            self.no_grouping,
            self.no_overlap,
            self.no_relevance,
            self.no_chaining,
            self.no_grounding_neighbor,
            self.no_tuning,
        ]
    }

    fn set(&mut self, name: &str) -> bool {
        let slot = match name {
            "no_grouping" => &mut self.no_grouping,
            "no_overlap" => &mut self.no_overlap,
            "no_relevance" => &mut self.no_relevance,
            "no_chaining" => &mut self.no_chaining,
            "no_grounding_neighbor" => &mut self.no_grounding_neighbor,
            "no_tuning" => &mut self.no_tuning,
            _ => return false,
        };
        *slot = true;
        true
    }

    pub fn is_empty(&self) -> bool {
        !self.bits().iter().any(|b| *b)
    }

    /// File-name tag such as `no-overlap+no-tuning`; `None` for the full model.
    pub fn tag(&self) -> Option<String> {
        if self.is_empty() {
            return None;
        }
        let parts: Vec<String> = NAMES
            .iter()
            .zip(self.bits())
            .filter(|(_, on)| *on)
            .map(|(n, _)| n.replace('_', "-"))
            .collect();
        Some(parts.join("+"))
    }
}

impl FromStr for AblationFlags {
    type Err = Error;

    /// Parses a comma list like `no-overlap,no_tuning`. Empty input and `none`
    /// give the full model.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut flags = AblationFlags::default();
        for raw in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let name = raw.replace('-', "_");
            if name == "none" {
                continue;
            }
            if !flags.set(&name) {
                return Err(Error::Config(format!("unknown ablation `{raw}`")));
            }
        }
        Ok(flags)
    }
}

impl fmt::Display for AblationFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag().as_deref().unwrap_or("none"))
    }
}
