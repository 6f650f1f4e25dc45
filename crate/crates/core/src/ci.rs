//! Conditional-independence queries behind one contract.
//!
//! A [`CiTester`] answers "is x independent of y given Z" and counts every
//! executed test in a monotone atomic counter — the counter is the basis of
//! the nTest efficiency metric, so implementations must increment it exactly
//! once per successful call and answers must be deterministic. Two
//! implementations live here: [`FisherZTester`] runs the Gaussian Fisher-z
//! test against a dataset's cached covariance, [`OracleTester`] answers
//! exactly from a graph via m-separation. [`MaxCondCap`] wraps any tester
//! and refuses queries whose conditioning set exceeds a fixed size.

use crate::data::Dataset;
use crate::graph::{GraphError, MixedGraph};
use nalgebra::DMatrix;
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CiError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("query endpoints must differ and stay out of the conditioning set (`{0}`)")]
    MalformedQuery(String),
    #[error("need more than |Z| + 3 = {need} samples, have {have}")]
    InsufficientSamples { need: usize, have: usize },
    #[error("conditioning submatrix is singular")]
    SingularCovariance,
    #[error("conditioning set of size {size} exceeds the cap of {cap}")]
    Refused { cap: usize, size: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A single query: is `x` independent of `y` given `z`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiQuery {
    pub x: String,
    pub y: String,
    pub z: Vec<String>,
}

impl CiQuery {
    pub fn new<S: AsRef<str>>(x: &str, y: &str, z: &[S]) -> Result<Self, CiError> {
        if x == y {
            return Err(CiError::MalformedQuery(x.to_string()));
        }
        let z: Vec<String> = z.iter().map(|s| s.as_ref().to_string()).collect();
        if z.iter().any(|v| v == x || v == y) {
            return Err(CiError::MalformedQuery(format!("{x} or {y} in Z")));
        }
        Ok(Self {
            x: x.to_string(),
            y: y.to_string(),
            z,
        })
    }
}

/// Outcome of one test. Oracles report statistic 0 and p-value 1 or 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiResult {
    pub independent: bool,
    pub statistic: f64,
    pub p_value: f64,
}

/// The independence-query contract.
///
/// Answers must be deterministic for identical queries against identical
/// state. Successful calls increment the query counter by exactly one;
/// refused or failed calls leave it unchanged. The counter is atomic so a
/// tester can be shared across threads, though a single search run is
/// sequential by design.
pub trait CiTester: Sync {
    fn test(&self, x: &str, y: &str, z: &[&str]) -> Result<CiResult, CiError>;

    /// Number of tests executed so far.
    fn query_count(&self) -> u64;

    /// Significance level used to binarize p-values.
    fn alpha(&self) -> f64;

    /// Maximum conditioning-set size this tester accepts, if any.
    fn cond_cap(&self) -> Option<usize> {
        None
    }

    /// The variables this tester can be queried about.
    fn variables(&self) -> &[String];
}

/// Partial correlation of columns `i`, `j` given `z` under covariance `cov`,
/// by inversion of the conditioning submatrix. The submatrix must be
/// symmetric positive definite; singularity is reported, not clamped.
pub fn partial_correlation(
    cov: &DMatrix<f64>,
    i: usize,
    j: usize,
    z: &[usize],
) -> Result<f64, CiError> {
    let k = z.len() + 2;
    let mut idx = Vec::with_capacity(k);
    idx.push(i);
    idx.push(j);
    idx.extend_from_slice(z);
    let mut sub = DMatrix::<f64>::zeros(k, k);
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            sub[(a, b)] = cov[(ia, ib)];
        }
    }
    let chol = sub.cholesky().ok_or(CiError::SingularCovariance)?;
    let prec = chol.inverse();
    let denom = prec[(0, 0)] * prec[(1, 1)];
    if denom <= 0.0 {
        return Err(CiError::SingularCovariance);
    }
    // Clamp the inevitable last-ulp overshoot, nothing more.
    Ok((-prec[(0, 1)] / denom.sqrt()).clamp(-1.0, 1.0))
}

/// Fisher-z test against a dataset. The covariance matrix is computed once
/// at construction and every query indexes into it; the test count reflects
/// tests, not covariance passes.
pub struct FisherZTester {
    columns: Vec<String>,
    index: HashMap<String, usize>,
    cov: DMatrix<f64>,
    n: usize,
    alpha: f64,
    count: AtomicU64,
    ridge_events: AtomicU64,
}

impl FisherZTester {
    pub fn new(data: &Dataset, alpha: f64) -> Self {
        assert!((0.0..1.0).contains(&alpha) && alpha > 0.0);
        let columns = data.columns().to_vec();
        let index = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Self {
            columns,
            index,
            cov: data.covariance(),
            n: data.n_rows(),
            alpha,
            count: AtomicU64::new(0),
            ridge_events: AtomicU64::new(0),
        }
    }

    fn col(&self, name: &str) -> Result<usize, CiError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| CiError::UnknownVariable(name.to_string()))
    }

    /// How often a singular conditioning submatrix forced the ridge fallback.
    pub fn ridge_events(&self) -> u64 {
        self.ridge_events.load(Ordering::Relaxed)
    }

    pub fn sample_size(&self) -> usize {
        self.n
    }
}

impl CiTester for FisherZTester {
    fn test(&self, x: &str, y: &str, z: &[&str]) -> Result<CiResult, CiError> {
        let xi = self.col(x)?;
        let yi = self.col(y)?;
        if xi == yi {
            return Err(CiError::MalformedQuery(x.to_string()));
        }
        let mut zi = Vec::with_capacity(z.len());
        for v in z {
            let c = self.col(v)?;
            if c == xi || c == yi {
                return Err(CiError::MalformedQuery(v.to_string()));
            }
            zi.push(c);
        }
        if self.n <= zi.len() + 3 {
            return Err(CiError::InsufficientSamples {
                need: zi.len() + 4,
                have: self.n,
            });
        }
        let r = match partial_correlation(&self.cov, xi, yi, &zi) {
            Ok(r) => r,
            Err(CiError::SingularCovariance) => {
                // Large conditioning sets (full-blanket discovery) can make
                // the submatrix numerically singular; retry once with a tiny
                // ridge and log it.
                self.ridge_events.fetch_add(1, Ordering::Relaxed);
                log::warn!("singular conditioning submatrix for ({x}, {y} | {} vars); retrying with 1e-8 ridge", zi.len());
                let mut ridged = self.cov.clone();
                for d in 0..ridged.nrows() {
                    ridged[(d, d)] += 1e-8;
                }
                partial_correlation(&ridged, xi, yi, &zi)?
            }
            Err(e) => return Err(e),
        };
        let dof = (self.n - zi.len() - 3) as f64;
        let statistic = if r.abs() >= 1.0 {
            f64::INFINITY * r.signum()
        } else {
            0.5 * ((1.0 + r) / (1.0 - r)).ln() * dof.sqrt()
        };
        let p_value = if statistic.is_infinite() {
            0.0
        } else {
            let normal = Normal::new(0.0, 1.0).unwrap();
            2.0 * normal.cdf(-statistic.abs())
        };
        self.count.fetch_add(1, Ordering::Relaxed);
        // Ties at p == alpha resolve to "dependent".
        Ok(CiResult {
            independent: p_value > self.alpha,
            statistic,
            p_value,
        })
    }

    fn query_count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn variables(&self) -> &[String] {
        &self.columns
    }
}

/// Exact tester backed by m-separation on a graph.
pub struct OracleTester {
    graph: MixedGraph,
    alpha: f64,
    count: AtomicU64,
}

impl OracleTester {
    pub fn new(graph: MixedGraph) -> Self {
        Self {
            graph,
            alpha: 0.01,
            count: AtomicU64::new(0),
        }
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.graph
    }
}

impl CiTester for OracleTester {
    fn test(&self, x: &str, y: &str, z: &[&str]) -> Result<CiResult, CiError> {
        let independent = self.graph.m_separated(x, y, z)?;
        self.count.fetch_add(1, Ordering::Relaxed);
        Ok(CiResult {
            independent,
            statistic: 0.0,
            p_value: if independent { 1.0 } else { 0.0 },
        })
    }

    fn query_count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn variables(&self) -> &[String] {
        self.graph.nodes()
    }
}

/// Wraps a tester with a hard conditioning-set size limit. Oversized
/// queries are refused (and not counted); subset searches read the cap and
/// skip larger candidates.
pub struct MaxCondCap<T> {
    inner: T,
    cap: usize,
}

/// Caps `tester` at conditioning sets of at most `k` variables.
pub fn max_cond_cap<T: CiTester>(tester: T, k: usize) -> MaxCondCap<T> {
    MaxCondCap { inner: tester, cap: k }
}

impl<T: CiTester> CiTester for MaxCondCap<T> {
    fn test(&self, x: &str, y: &str, z: &[&str]) -> Result<CiResult, CiError> {
        if z.len() > self.cap {
            return Err(CiError::Refused {
                cap: self.cap,
                size: z.len(),
            });
        }
        self.inner.test(x, y, z)
    }

    fn query_count(&self) -> u64 {
        self.inner.query_count()
    }

    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    fn cond_cap(&self) -> Option<usize> {
        Some(self.cap)
    }

    fn variables(&self) -> &[String] {
        self.inner.variables()
    }
}

/// Opt-in answer cache around a tester. Repeated queries (up to symmetry
/// and conditioning-set order) are served from the cache without executing
/// — or counting — another test, so a memoized tester's counter no longer
/// reflects what a search would cost; keep it out of efficiency
/// comparisons. Off by default everywhere for exactly that reason.
pub struct Memoized<T> {
    inner: T,
    cache: std::sync::Mutex<HashMap<(String, String, Vec<String>), CiResult>>,
}

pub fn memoized<T: CiTester>(tester: T) -> Memoized<T> {
    Memoized {
        inner: tester,
        cache: std::sync::Mutex::new(HashMap::new()),
    }
}

impl<T: CiTester> CiTester for Memoized<T> {
    fn test(&self, x: &str, y: &str, z: &[&str]) -> Result<CiResult, CiError> {
        let (a, b) = if x <= y { (x, y) } else { (y, x) };
        let mut zs: Vec<String> = z.iter().map(|v| v.to_string()).collect();
        zs.sort_unstable();
        let key = (a.to_string(), b.to_string(), zs);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(*hit);
        }
        let res = self.inner.test(x, y, z)?;
        self.cache.lock().unwrap().insert(key, res);
        Ok(res)
    }

    fn query_count(&self) -> u64 {
        self.inner.query_count()
    }

    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    fn cond_cap(&self) -> Option<usize> {
        self.inner.cond_cap()
    }

    fn variables(&self) -> &[String] {
        self.inner.variables()
    }
}

impl<T: CiTester + ?Sized> CiTester for &T {
    fn test(&self, x: &str, y: &str, z: &[&str]) -> Result<CiResult, CiError> {
        (**self).test(x, y, z)
    }

    fn query_count(&self) -> u64 {
        (**self).query_count()
    }

    fn alpha(&self) -> f64 {
        (**self).alpha()
    }

    fn cond_cap(&self) -> Option<usize> {
        (**self).cond_cap()
    }

    fn variables(&self) -> &[String] {
        (**self).variables()
    }
}
