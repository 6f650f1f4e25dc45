//! Markov-blanket discovery by total conditioning: v belongs to the blanket
//! of a target exactly when the two stay dependent given all remaining
//! variables. One test per candidate, so a target costs |V|−1 tests and a
//! treatment/outcome pair costs 2|V|−3 (the shared treatment–outcome query
//! is asked once and reused).
//!
//! Total conditioning deliberately ignores any conditioning-set cap: the
//! cap governs the downstream adjustment-set search, not blanket discovery.
//! A capped tester therefore surfaces its refusal here instead of being
//! silently worked around.

use crate::ci::{CiError, CiTester};
use crate::graph::NodePair;

/// Discovered blanket plus the number of tests spent on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MbResult {
    pub target: String,
    pub members: Vec<String>,
    pub queries_used: u64,
}

/// Runs total conditioning for one target over `all_vars`.
pub fn total_conditioning_mb(
    tester: &dyn CiTester,
    all_vars: &[String],
    target: &str,
) -> Result<MbResult, CiError> {
    if !all_vars.iter().any(|v| v == target) {
        return Err(CiError::UnknownVariable(target.to_string()));
    }
    let mut members = Vec::new();
    let mut queries = 0u64;
    for v in all_vars {
        if v == target {
            continue;
        }
        let z: Vec<&str> = all_vars
            .iter()
            .filter(|w| *w != v && w.as_str() != target)
            .map(String::as_str)
            .collect();
        let res = tester.test(target, v, &z)?;
        queries += 1;
        if !res.independent {
            members.push(v.clone());
        }
    }
    Ok(MbResult {
        target: target.to_string(),
        members,
        queries_used: queries,
    })
}

/// Discovers the blankets of both pair members, sharing the single
/// treatment–outcome query between them.
pub fn discover_pair_mbs(
    tester: &dyn CiTester,
    all_vars: &[String],
    pair: &NodePair,
) -> Result<(MbResult, MbResult), CiError> {
    let x = pair.treatment.as_str();
    let y = pair.outcome.as_str();
    if !all_vars.iter().any(|v| v == y) {
        return Err(CiError::UnknownVariable(y.to_string()));
    }
    let mb_x = total_conditioning_mb(tester, all_vars, x)?;
    let x_in_y_blanket = mb_x.members.iter().any(|v| v == y);

    let mut members = Vec::new();
    let mut queries = 0u64;
    for v in all_vars {
        if v == y {
            continue;
        }
        if v == x {
            // The (X, Y | rest) answer is symmetric; reuse it.
            if x_in_y_blanket {
                members.push(v.clone());
            }
            continue;
        }
        let z: Vec<&str> = all_vars
            .iter()
            .filter(|w| *w != v && w.as_str() != y)
            .map(String::as_str)
            .collect();
        let res = tester.test(y, v, &z)?;
        queries += 1;
        if !res.independent {
            members.push(v.clone());
        }
    }
    let mb_y = MbResult {
        target: y.to_string(),
        members,
        queries_used: queries,
    };
    Ok((mb_x, mb_y))
}
