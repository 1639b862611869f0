//! JSON instance files.
//!
//! ```json
//! {
//!   "demand": 1148.4,
//!   "bidders": [
//!     { "capacity": 700.0, "actions": [[0.07, 9.0], [0.08, 10.0]] }
//!   ]
//! }
//! ```
//!
//! Bidder ids follow file order starting at 0, and `actions[0]` of each
//! bidder is its true cost.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market::{BidFunction, BidderSpec, MarketError, MarketInstance};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read instance file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed instance document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] MarketError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub demand: f64,
    pub bidders: Vec<BidderEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidderEntry {
    pub capacity: f64,
    pub actions: Vec<BidFunction>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<MarketInstance, MarketError> {
        let bidders = self
            .bidders
            .into_iter()
            .enumerate()
            .map(|(id, b)| BidderSpec::new(id, b.actions, b.capacity))
            .collect::<Result<Vec<_>, _>>()?;
        MarketInstance::new(bidders, self.demand)
    }
}

impl From<&MarketInstance> for InstanceFile {
    fn from(instance: &MarketInstance) -> Self {
        Self {
            demand: instance.demand(),
            bidders: instance
                .bidders()
                .iter()
                .map(|b| BidderEntry {
                    capacity: b.capacity(),
                    actions: b.actions().to_vec(),
                })
                .collect(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<MarketInstance, InstanceError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    Ok(file.into_instance()?)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<MarketInstance, InstanceError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_document() {
        let inst = parse_instance(
            r#"{"demand": 10, "bidders": [{"capacity": 100, "actions": [[2, 10], [2, 20]]}]}"#,
        )
        .unwrap();
        assert_eq!(inst.len(), 1);
        assert_eq!(inst.bidder(0).action_count(), 2);
        assert_eq!(inst.bidder(0).true_cost().d(), 10.0);
    }

    #[test]
    fn rejects_bad_documents() {
        // infeasible demand
        let err = parse_instance(
            r#"{"demand": 200, "bidders": [{"capacity": 100, "actions": [[2, 10]]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            InstanceError::Invalid(MarketError::InfeasibleDemand { .. })
        ));
        // negative coefficient
        assert!(parse_instance(
            r#"{"demand": 1, "bidders": [{"capacity": 10, "actions": [[-1, 10]]}]}"#
        )
        .is_err());
        // empty grid
        assert!(
            parse_instance(r#"{"demand": 1, "bidders": [{"capacity": 10, "actions": []}]}"#)
                .is_err()
        );
        // unknown field
        assert!(parse_instance(r#"{"demand": 1, "load": 2, "bidders": []}"#).is_err());
        // no bidders
        assert!(parse_instance(r#"{"demand": 0, "bidders": []}"#).is_err());
    }

    #[test]
    fn document_round_trip() {
        let text = r#"{"demand":5.5,"bidders":[{"capacity":7.0,"actions":[[0.5,3.0],[1.0,4.0]]}]}"#;
        let inst = parse_instance(text).unwrap();
        let back = serde_json::to_string(&InstanceFile::from(&inst)).unwrap();
        assert_eq!(back, text);
    }
}
