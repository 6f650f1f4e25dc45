//! Deciding whether X causally affects Y, and estimating by how much.
//!
//! Two independence/dependence rules drive everything. For a witness
//! S from the treatment's Markov blanket and a candidate set Z from the
//! outcome's blanket:
//!
//! - R1 certifies an effect *and* an adjustment set: S ⊥̸ Y | Z together
//!   with S ⊥ Y | Z ∪ {X} means every active S–Y path runs through X, so Z
//!   blocks all non-causal X–Y paths and the adjusted regression of Y on
//!   {X} ∪ Z is unbiased.
//! - R2 certifies the absence of an effect: either X ⊥ Y | Z directly, or
//!   S ⊥̸ X | Z while S ⊥ Y | Z (a directed X → Y edge would transmit the
//!   dependence).
//!
//! [`run_lsas`] searches S over MB(X)∖{Y} and Z over subsets of MB(Y)∖{X};
//! [`run_ehs`] searches the full covariate set instead and serves as the
//! global-search completeness baseline. If neither rule ever fires the
//! effect is undecidable from testable (in)dependencies and the result is
//! [`Decision::Unknown`].
//!
//! One quirk is worth spelling out: the direct clause of R2 does not
//! involve S, but the nested loop only reaches it while some S candidate
//! exists outside Z. For the degenerate universes where that fails (an
//! isolated treatment, or every witness inside Z) both searches fall back
//! to an S-free direct check, which keeps the local and the global search
//! in exact agreement.

use crate::ci::{CiError, CiResult, CiTester};
use crate::data::{DataError, Dataset};
use crate::graph::NodePair;
use crate::mb::{discover_pair_mbs, MbResult};
use crate::subsets::index_subsets;
use std::collections::HashMap;
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("tester failed: {source}")]
    Aborted {
        source: CiError,
        trace: Box<SearchTrace>,
    },
    #[error(transparent)]
    Ci(#[from] CiError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("need more than |Z| + 2 = {need} samples, have {have}")]
    InsufficientSamples { need: usize, have: usize },
    #[error("rank-deficient regression design")]
    RankDeficient,
    #[error("{n} covariates make an uncapped exhaustive search infeasible; set a cap")]
    SearchSpaceTooLarge { n: usize },
    #[error("variable `{0}` is not among the search variables")]
    UnknownVariable(String),
}

/// Outcome of a search run.
#[derive(Debug, Clone)]
pub enum Decision {
    /// X affects Y; `theta` is the adjusted estimate (NaN when the run had
    /// no data), `z` the certified adjustment set, `s` the witness.
    Effect {
        theta: f64,
        z: Vec<String>,
        s: String,
    },
    NoEffect,
    Unknown,
}

// Manual equality so the NaN estimate sentinel of data-free runs compares
// equal to itself.
impl PartialEq for Decision {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                Decision::Effect { theta: a, z: za, s: sa },
                Decision::Effect { theta: b, z: zb, s: sb },
            ) => (a == b || (a.is_nan() && b.is_nan())) && za == zb && sa == sb,
            (Decision::NoEffect, Decision::NoEffect) => true,
            (Decision::Unknown, Decision::Unknown) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionKind {
    Effect,
    NoEffect,
    Unknown,
}

impl Decision {
    pub fn kind(&self) -> DecisionKind {
        match self {
            Decision::Effect { .. } => DecisionKind::Effect,
            Decision::NoEffect => DecisionKind::NoEffect,
            Decision::Unknown => DecisionKind::Unknown,
        }
    }
}

impl std::fmt::Display for DecisionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DecisionKind::Effect => "effect",
            DecisionKind::NoEffect => "no_effect",
            DecisionKind::Unknown => "unknown",
        })
    }
}

/// Which rule ended the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFired {
    R1,
    R2i,
    R2ii,
    None,
}

/// One rule firing, kept for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Firing {
    pub rule: RuleFired,
    pub s: Option<String>,
    pub z: Vec<String>,
}

/// Bookkeeping for a single run. `n_tests` is the tester-counter delta and
/// includes blanket discovery for the local search.
#[derive(Debug, Clone)]
pub struct SearchTrace {
    pub n_tests: u64,
    pub pairs_examined: u64,
    pub rule_fired: RuleFired,
    pub elapsed: Duration,
    pub refusals: u64,
    pub firings: Vec<Firing>,
    pub mb_x: Option<MbResult>,
    pub mb_y: Option<MbResult>,
}

impl SearchTrace {
    fn new() -> Self {
        Self {
            n_tests: 0,
            pairs_examined: 0,
            rule_fired: RuleFired::None,
            elapsed: Duration::ZERO,
            refusals: 0,
            firings: Vec::new(),
            mb_x: None,
            mb_y: None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Maximum size of the enumerated candidate sets Z. `None` enumerates
    /// the whole power set of the universe.
    pub cap: Option<usize>,
    /// Keep looping after an R1 match instead of returning immediately,
    /// overwriting the stored estimate on every later match. Off by
    /// default: under an exact tester both behaviours coincide, and the
    /// early return spends fewer tests.
    pub exhaustive_r1: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            cap: None,
            exhaustive_r1: false,
        }
    }
}

impl SearchOptions {
    pub fn capped(cap: usize) -> Self {
        Self {
            cap: Some(cap),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleCheck {
    Fires,
    Fails,
    /// A capped tester refused one of the required queries; the rule is
    /// treated as not applicable for this candidate.
    Refused,
}

/// Evaluates R1/R2 against one tester and pair, memoizing the S-free direct
/// clause of R2 per candidate set within the run (a memo hit executes no
/// test and therefore does not count toward nTest).
pub struct RuleEvaluator<'a> {
    tester: &'a dyn CiTester,
    pair: &'a NodePair,
    r2_direct_memo: HashMap<Vec<String>, bool>,
    pub refusals: u64,
}

impl<'a> RuleEvaluator<'a> {
    pub fn new(tester: &'a dyn CiTester, pair: &'a NodePair) -> Self {
        Self {
            tester,
            pair,
            r2_direct_memo: HashMap::new(),
            refusals: 0,
        }
    }

    fn run_test(&mut self, x: &str, y: &str, z: &[&str]) -> Result<Option<CiResult>, CiError> {
        match self.tester.test(x, y, z) {
            Ok(res) => Ok(Some(res)),
            Err(CiError::Refused { cap, size }) => {
                self.refusals += 1;
                log::debug!("tester refused ({x}, {y} | {size} vars) at cap {cap}");
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    /// R1: (i) S ⊥̸ Y | Z and (ii) S ⊥ Y | Z ∪ {X}. Two tests when (i)
    /// holds, one otherwise.
    pub fn check_r1(&mut self, s: &str, z: &[&str]) -> Result<RuleCheck, CiError> {
        let p = self.pair;
        let dep = match self.run_test(s, &p.outcome, z)? {
            Some(res) => res,
            None => return Ok(RuleCheck::Refused),
        };
        if dep.independent {
            return Ok(RuleCheck::Fails);
        }
        let mut z_plus_x: Vec<&str> = z.to_vec();
        z_plus_x.push(&p.treatment);
        let ind = match self.run_test(s, &p.outcome, &z_plus_x)? {
            Some(res) => res,
            None => return Ok(RuleCheck::Refused),
        };
        Ok(if ind.independent {
            RuleCheck::Fires
        } else {
            RuleCheck::Fails
        })
    }

    /// The direct clause of R2: X ⊥ Y | Z. Memoized per Z.
    pub fn check_r2_direct(&mut self, z: &[&str]) -> Result<RuleCheck, CiError> {
        let key: Vec<String> = z.iter().map(|s| s.to_string()).collect();
        if let Some(&hit) = self.r2_direct_memo.get(&key) {
            return Ok(if hit { RuleCheck::Fires } else { RuleCheck::Fails });
        }
        let p = self.pair;
        let res = match self.run_test(&p.treatment, &p.outcome, z)? {
            Some(res) => res,
            None => return Ok(RuleCheck::Refused),
        };
        self.r2_direct_memo.insert(key, res.independent);
        Ok(if res.independent {
            RuleCheck::Fires
        } else {
            RuleCheck::Fails
        })
    }

    /// R2: (i) X ⊥ Y | Z, or (ii) S ⊥̸ X | Z and S ⊥ Y | Z. Reports which
    /// clause fired.
    pub fn check_r2(&mut self, s: &str, z: &[&str]) -> Result<(RuleCheck, RuleFired), CiError> {
        match self.check_r2_direct(z)? {
            RuleCheck::Fires => return Ok((RuleCheck::Fires, RuleFired::R2i)),
            RuleCheck::Fails | RuleCheck::Refused => {}
        }
        let p = self.pair;
        let dep = match self.run_test(s, &p.treatment, z)? {
            Some(res) => res,
            None => return Ok((RuleCheck::Refused, RuleFired::None)),
        };
        if dep.independent {
            return Ok((RuleCheck::Fails, RuleFired::None));
        }
        let ind = match self.run_test(s, &p.outcome, z)? {
            Some(res) => res,
            None => return Ok((RuleCheck::Refused, RuleFired::None)),
        };
        Ok(if ind.independent {
            (RuleCheck::Fires, RuleFired::R2ii)
        } else {
            (RuleCheck::Fails, RuleFired::None)
        })
    }
}

/// Ordinary least squares of the outcome on {treatment} ∪ Z with an
/// intercept; returns the treatment coefficient. With Z = ∅ this is
/// Cov(X,Y)/Var(X).
pub fn estimate_effect<S: AsRef<str>>(
    data: &Dataset,
    pair: &NodePair,
    z: &[S],
) -> Result<f64, EngineError> {
    let n = data.n_rows();
    if n <= z.len() + 2 {
        return Err(EngineError::InsufficientSamples {
            need: z.len() + 3,
            have: n,
        });
    }
    let yc = data.column_index(&pair.outcome)?;
    let mut regs = Vec::with_capacity(z.len() + 1);
    regs.push(data.column_index(&pair.treatment)?);
    for v in z {
        regs.push(data.column_index(v.as_ref())?);
    }
    let k = regs.len();

    // Centering absorbs the intercept and keeps the normal equations well
    // scaled.
    let mut means = vec![0.0f64; k + 1];
    for r in 0..n {
        for (a, &c) in regs.iter().enumerate() {
            means[a] += data.value(r, c);
        }
        means[k] += data.value(r, yc);
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut gram = nalgebra::DMatrix::<f64>::zeros(k, k);
    let mut rhs = nalgebra::DVector::<f64>::zeros(k);
    let mut row = vec![0.0f64; k];
    for r in 0..n {
        for (a, &c) in regs.iter().enumerate() {
            row[a] = data.value(r, c) - means[a];
        }
        let dy = data.value(r, yc) - means[k];
        for a in 0..k {
            for b in a..k {
                gram[(a, b)] += row[a] * row[b];
            }
            rhs[a] += row[a] * dy;
        }
    }
    for a in 0..k {
        for b in 0..a {
            gram[(a, b)] = gram[(b, a)];
        }
    }
    let chol = gram.cholesky().ok_or(EngineError::RankDeficient)?;
    let beta = chol.solve(&rhs);
    Ok(beta[0])
}

/// Local search: blankets first, then S over MB(X)∖{Y} and Z over subsets
/// of MB(Y)∖{X} in increasing size, R1 before R2 for every pair. Returns on
/// the first firing (unless `exhaustive_r1`).
pub fn run_lsas(
    tester: &dyn CiTester,
    data: Option<&Dataset>,
    pair: &NodePair,
    all_vars: &[String],
    opts: &SearchOptions,
) -> Result<(Decision, SearchTrace), EngineError> {
    let started = Instant::now();
    let count0 = tester.query_count();
    let mut trace = SearchTrace::new();

    let (mb_x, mb_y) = match discover_pair_mbs(tester, all_vars, pair) {
        Ok(pairs) => pairs,
        Err(e) => {
            trace.n_tests = tester.query_count() - count0;
            trace.elapsed = started.elapsed();
            return Err(EngineError::Aborted {
                source: e,
                trace: Box::new(trace),
            });
        }
    };
    let s_cands: Vec<String> = mb_x
        .members
        .iter()
        .filter(|v| **v != pair.outcome)
        .cloned()
        .collect();
    let z_universe: Vec<String> = mb_y
        .members
        .iter()
        .filter(|v| **v != pair.treatment)
        .cloned()
        .collect();
    trace.mb_x = Some(mb_x);
    trace.mb_y = Some(mb_y);

    search(
        tester, data, pair, &s_cands, &z_universe, opts, trace, count0, started,
    )
}

/// Global search over the whole covariate set, with identical rule
/// semantics. The completeness baseline: S ranges over all covariates and
/// Z over all subsets of the remaining ones.
pub fn run_ehs(
    tester: &dyn CiTester,
    data: Option<&Dataset>,
    pair: &NodePair,
    all_vars: &[String],
    opts: &SearchOptions,
) -> Result<(Decision, SearchTrace), EngineError> {
    let started = Instant::now();
    let count0 = tester.query_count();
    let trace = SearchTrace::new();
    for end in [&pair.treatment, &pair.outcome] {
        if !all_vars.iter().any(|v| v == end) {
            return Err(EngineError::UnknownVariable(end.clone()));
        }
    }
    let covariates: Vec<String> = all_vars
        .iter()
        .filter(|v| **v != pair.treatment && **v != pair.outcome)
        .cloned()
        .collect();
    if opts.cap.is_none() && tester.cond_cap().is_none() && covariates.len() > 20 {
        return Err(EngineError::SearchSpaceTooLarge {
            n: covariates.len(),
        });
    }
    search(
        tester,
        data,
        pair,
        &covariates,
        &covariates,
        opts,
        trace,
        count0,
        started,
    )
}

#[allow(clippy::too_many_arguments)]
fn search(
    tester: &dyn CiTester,
    data: Option<&Dataset>,
    pair: &NodePair,
    s_cands: &[String],
    z_universe: &[String],
    opts: &SearchOptions,
    mut trace: SearchTrace,
    count0: u64,
    started: Instant,
) -> Result<(Decision, SearchTrace), EngineError> {
    let mut eval = RuleEvaluator::new(tester, pair);
    let mut stored_effect: Option<(f64, Vec<String>, String)> = None;

    let z_cap = [
        opts.cap.unwrap_or(usize::MAX),
        tester.cond_cap().unwrap_or(usize::MAX),
        z_universe.len(),
    ]
    .into_iter()
    .min()
    .unwrap();

    macro_rules! finish {
        ($decision:expr) => {{
            trace.refusals = eval.refusals;
            trace.n_tests = tester.query_count() - count0;
            trace.elapsed = started.elapsed();
            return Ok(($decision, trace));
        }};
    }
    macro_rules! bail {
        ($err:expr) => {{
            trace.refusals = eval.refusals;
            trace.n_tests = tester.query_count() - count0;
            trace.elapsed = started.elapsed();
            return Err(EngineError::Aborted {
                source: $err,
                trace: Box::new(trace),
            });
        }};
    }

    for s in s_cands {
        for z_idx in index_subsets(z_universe.len(), z_cap) {
            let z_names: Vec<&str> = z_idx.iter().map(|&i| z_universe[i].as_str()).collect();
            if z_names.iter().any(|v| v == s) {
                continue;
            }
            trace.pairs_examined += 1;

            match eval.check_r1(s, &z_names) {
                Ok(RuleCheck::Fires) => {
                    let z_owned: Vec<String> = z_names.iter().map(|v| v.to_string()).collect();
                    let theta = match data {
                        Some(d) => match estimate_effect(d, pair, &z_owned) {
                            Ok(t) => t,
                            Err(e) => {
                                log::warn!("effect estimation failed: {e}");
                                f64::NAN
                            }
                        },
                        None => f64::NAN,
                    };
                    trace.firings.push(Firing {
                        rule: RuleFired::R1,
                        s: Some(s.clone()),
                        z: z_owned.clone(),
                    });
                    if opts.exhaustive_r1 {
                        stored_effect = Some((theta, z_owned, s.clone()));
                    } else {
                        trace.rule_fired = RuleFired::R1;
                        finish!(Decision::Effect {
                            theta,
                            z: z_owned,
                            s: s.clone(),
                        });
                    }
                }
                Ok(RuleCheck::Fails | RuleCheck::Refused) => {}
                Err(e) => bail!(e),
            }

            match eval.check_r2(s, &z_names) {
                Ok((RuleCheck::Fires, which)) => {
                    trace.firings.push(Firing {
                        rule: which,
                        s: Some(s.clone()),
                        z: z_names.iter().map(|v| v.to_string()).collect(),
                    });
                    trace.rule_fired = which;
                    finish!(Decision::NoEffect);
                }
                Ok(_) => {}
                Err(e) => bail!(e),
            }
        }
    }

    // Candidate sets no witness survives (every S inside Z, or no S at
    // all) never reach the nested loop, but the direct clause of R2 does
    // not need a witness. Sweep them so the degenerate universes resolve
    // the same way the global search does.
    for z_idx in index_subsets(z_universe.len(), z_cap) {
        let z_names: Vec<&str> = z_idx.iter().map(|&i| z_universe[i].as_str()).collect();
        if s_cands.iter().any(|s| !z_names.iter().any(|v| v == s)) {
            continue;
        }
        match eval.check_r2_direct(&z_names) {
            Ok(RuleCheck::Fires) => {
                trace.firings.push(Firing {
                    rule: RuleFired::R2i,
                    s: None,
                    z: z_names.iter().map(|v| v.to_string()).collect(),
                });
                trace.rule_fired = RuleFired::R2i;
                finish!(Decision::NoEffect);
            }
            Ok(_) => {}
            Err(e) => bail!(e),
        }
    }

    if let Some((theta, z, s)) = stored_effect {
        trace.rule_fired = RuleFired::R1;
        finish!(Decision::Effect { theta, z, s });
    }
    finish!(Decision::Unknown)
}
