//! Recursive construction of codes with δ-optimal access for every node.
//!
//! Starting from a scalar Vandermonde code of length `n + τδ` (`τ = ⌈n/2⌉`),
//! the transformation is applied `τ` times. Round `ρ < τ − 1` endows nodes
//! `(2ρ, 2ρ + 1)`; the last round endows `(n − 2, n − 1)`. Round `ρ` adds the
//! `ρ`-th base-`δ` digit of the symbol index (digit 0 least significant), so a
//! node last endowed in round `ρ` as goal `g` is repaired from the symbols
//! whose `ρ`-th digit equals `g`.

use serde::{Deserialize, Serialize};

use crate::code::{vandermonde_code, BlockParityCheckCode, CodeDocument};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::transform::{apply_transform, TransformSpec};

/// Which symbols a failed node's helpers send, and which rows of each
/// parity-check group the repair uses. Both are the same index set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepairPlan {
    pub node: usize,
    pub round: usize,
    pub goal_index: usize,
    pub accessed: Vec<usize>,
    pub selected_rows: Vec<usize>,
}

impl RepairPlan {
    /// Plan of a node endowed in `round` as goal `goal_index`, for a code
    /// whose sub-packetization is `base_sub · δ^τ`.
    pub fn from_digit(node: usize, round: usize, goal_index: usize, delta: usize, tau: usize, base_sub: usize) -> Self {
        let total = base_sub * delta.pow(tau as u32);
        let stride = delta.pow(round as u32);
        let accessed: Vec<usize> = (0..total)
            .filter(|&a| (a / base_sub / stride) % delta == goal_index)
            .collect();
        RepairPlan { node, round, goal_index, selected_rows: accessed.clone(), accessed }
    }

    /// Symbols read from each helper.
    pub fn per_helper(&self) -> usize {
        self.accessed.len()
    }
}

/// A code with δ-optimal access for all nodes, plus its repair plans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessOptimalCode {
    pub code: BlockParityCheckCode,
    pub plans: Vec<RepairPlan>,
    pub delta: usize,
    pub tau: usize,
    /// `Q_1 … Q_{τ−1}`, empty when not retained.
    pub intermediates: Vec<BlockParityCheckCode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    pub keep_intermediates: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { keep_intermediates: true }
    }
}

/// Number of transformation rounds for `n` nodes.
pub fn rounds(n: usize) -> usize {
    n.div_ceil(2)
}

/// Checks `(n, k, δ)` and returns `τ`.
pub fn validate_params(n: usize, k: usize, delta: usize) -> Result<usize> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameters(format!("need 1 <= k < n, got n={n}, k={k}")));
    }
    let r = n - k;
    if delta < 2 || delta > r {
        return Err(Error::DeltaOutOfRange { delta, r });
    }
    let tau = rounds(n);
    if (delta as u64).checked_pow(tau as u32).is_none_or(|v| v > u32::MAX as u64) {
        return Err(Error::InvalidParameters(format!("sub-packetization {delta}^{tau} is too large")));
    }
    Ok(tau)
}

/// Builds the `(n, k)` code over the smallest prime field that fits the
/// Vandermonde base code.
pub fn build(n: usize, k: usize, delta: usize) -> Result<AccessOptimalCode> {
    build_with(n, k, delta, BuildOptions::default())
}

pub fn build_with(n: usize, k: usize, delta: usize, opts: BuildOptions) -> Result<AccessOptimalCode> {
    let tau = validate_params(n, k, delta)?;
    let n_prime = n + tau * delta;
    let field = Field::smallest_at_least(n_prime as u64 + 1)?;
    let base = vandermonde_code(n_prime, n - k, field)?;
    build_from_base(&base, n, delta, opts)
}

/// Runs the goal-pair schedule on a caller-supplied base code with
/// `n + ⌈n/2⌉·δ` nodes. The base is assumed MDS.
pub fn build_from_base(base: &BlockParityCheckCode, n: usize, delta: usize, opts: BuildOptions) -> Result<AccessOptimalCode> {
    let r = base.r();
    if n <= r {
        return Err(Error::InvalidParameters(format!("need n > r, got n={n}, r={r}")));
    }
    let tau = validate_params(n, n - r, delta)?;
    if base.n() != n + tau * delta {
        return Err(Error::InvalidParameters(format!(
            "base code has {} nodes, expected n + tau*delta = {}",
            base.n(),
            n + tau * delta
        )));
    }
    let base_sub = base.sub_packetization();
    let mut current = base.clone();
    let mut intermediates = Vec::new();
    let mut last_goal = vec![None; n];
    for round in 0..tau {
        let pair = if round + 1 < tau { (2 * round, 2 * round + 1) } else { (n - 2, n - 1) };
        current = apply_transform(&current, &TransformSpec::new(delta, pair))?;
        last_goal[pair.0] = Some((round, 0));
        last_goal[pair.1] = Some((round, 1));
        if opts.keep_intermediates && round + 1 < tau {
            intermediates.push(current.clone());
        }
    }
    let plans = last_goal
        .into_iter()
        .enumerate()
        .map(|(node, g)| {
            let (round, goal_index) = g.expect("every node is a goal node in some round");
            RepairPlan::from_digit(node, round, goal_index, delta, tau, base_sub)
        })
        .collect();
    Ok(AccessOptimalCode { code: current, plans, delta, tau, intermediates })
}

impl AccessOptimalCode {
    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    /// Helpers contacted during a repair: `d = k + δ − 1`.
    pub fn helpers(&self) -> usize {
        self.code.k() + self.delta - 1
    }

    /// Lower bound on total repair download, `d·N/(d − k + 1)`, which is
    /// `d·N/δ` symbols.
    pub fn bandwidth_bound(&self) -> usize {
        self.helpers() * self.code.sub_packetization() / self.delta
    }

    pub fn repair_plan(&self, node: usize) -> Result<&RepairPlan> {
        self.plans.get(node).ok_or(Error::NodeOutOfRange { node, n: self.n() })
    }

    pub fn to_document(&self) -> AccessOptimalDocument {
        AccessOptimalDocument {
            code: self.code.to_document(),
            delta: self.delta,
            tau: self.tau,
            plans: self
                .plans
                .iter()
                .map(|p| PlanDocument {
                    node: p.node,
                    round: p.round,
                    goal_index: p.goal_index,
                    accessed: p.accessed.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds from a document, checking the plan invariants. Intermediates
    /// are not part of the document.
    pub fn from_document(doc: &AccessOptimalDocument) -> Result<Self> {
        let code = BlockParityCheckCode::from_document(&doc.code)?;
        let n = code.n();
        let sub = code.sub_packetization();
        if doc.delta < 2 || doc.delta > code.r() {
            return Err(Error::DeltaOutOfRange { delta: doc.delta, r: code.r() });
        }
        if sub % doc.delta != 0 {
            return Err(Error::CodeMismatch(format!("N = {sub} is not a multiple of delta = {}", doc.delta)));
        }
        if doc.plans.len() != n {
            return Err(Error::CodeMismatch(format!("{} plans for {n} nodes", doc.plans.len())));
        }
        let mut plans = Vec::with_capacity(n);
        for (i, p) in doc.plans.iter().enumerate() {
            if p.node != i {
                return Err(Error::CodeMismatch(format!("plan {i} is for node {}", p.node)));
            }
            let sorted = p.accessed.windows(2).all(|w| w[0] < w[1]);
            if !sorted || p.accessed.len() != sub / doc.delta || p.accessed.iter().any(|&a| a >= sub) {
                return Err(Error::CodeMismatch(format!(
                    "plan for node {i} must list {} distinct ascending indices below {sub}",
                    sub / doc.delta
                )));
            }
            plans.push(RepairPlan {
                node: p.node,
                round: p.round,
                goal_index: p.goal_index,
                accessed: p.accessed.clone(),
                selected_rows: p.accessed.clone(),
            });
        }
        Ok(AccessOptimalCode { code, plans, delta: doc.delta, tau: doc.tau, intermediates: Vec::new() })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

/// Serialized form of an [`AccessOptimalCode`]: the code document followed
/// by `delta`, `tau` and the per-node plans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessOptimalDocument {
    #[serde(flatten)]
    pub code: CodeDocument,
    pub delta: usize,
    pub tau: usize,
    pub plans: Vec<PlanDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub node: usize,
    pub round: usize,
    pub goal_index: usize,
    pub accessed: Vec<usize>,
}
