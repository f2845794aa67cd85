//! Plan-driven single-node repair with exact bandwidth accounting.
//!
//! For a failed node `i` with accessed set `T`, every helper sends `f_j[T]`.
//! Restricting each parity-check group to rows `T` gives `r·|T|` equations.
//! Because the plan is a row selection, the rows `T` of every other node's
//! block must vanish outside columns `T`; the helpers' terms are then fully
//! known, and the unknowns are the `N` symbols of node `i` plus `f_j[T]` for
//! each of the `r − δ` survivors that were not contacted.

use serde::Serialize;

use crate::builder::{AccessOptimalCode, RepairPlan};
use crate::code::{BlockParityCheckCode, Codeword};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subsets::combinations;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandwidthReport {
    pub failed: usize,
    pub helpers: Vec<usize>,
    pub downloaded_per_helper: usize,
    pub accessed_per_helper: usize,
    pub total_downloaded: usize,
    /// `d·N/(d − k + 1)`.
    pub bound: usize,
}

impl BandwidthReport {
    pub fn is_optimal(&self) -> bool {
        self.total_downloaded == self.bound
    }
}

/// Confirms that rows `plan.selected_rows` of every block of every node
/// other than `plan.node` are zero outside columns `plan.accessed`.
pub fn check_support(code: &BlockParityCheckCode, plan: &RepairPlan) -> Result<()> {
    let sub = code.sub_packetization();
    let mut inside = vec![false; sub];
    for &a in &plan.accessed {
        inside[a] = true;
    }
    for t in 0..code.r() {
        for j in (0..code.n()).filter(|&j| j != plan.node) {
            let b = code.block(t, j);
            for &row in &plan.selected_rows {
                if let Some(col) = b.row(row).iter().enumerate().position(|(c, &v)| v != 0 && !inside[c]) {
                    return Err(Error::NotAccessOptimalPlan { failed: plan.node, pcg: t, node: j, row, col });
                }
            }
        }
    }
    Ok(())
}

/// Coefficient matrix of the repair system for `plan.node` when the nodes
/// in `excluded` are not contacted. Unknown order: the failed node's `N`
/// symbols, then each excluded node's projection in ascending node order.
pub fn repair_matrix(code: &BlockParityCheckCode, plan: &RepairPlan, excluded: &[usize]) -> Matrix {
    let sub = code.sub_packetization();
    let rows = &plan.selected_rows;
    let width = plan.accessed.len();
    let mut m = Matrix::zeros(code.r() * rows.len(), sub + excluded.len() * width);
    for t in 0..code.r() {
        let r0 = t * rows.len();
        m.set_block(r0, 0, &code.block(t, plan.node).select_rows(rows));
        for (c, &j) in excluded.iter().enumerate() {
            let part = code.block(t, j).select_rows(rows).select_cols(&plan.accessed);
            m.set_block(r0, sub + c * width, &part);
        }
    }
    m
}

fn validate_helpers(code: &BlockParityCheckCode, delta: usize, failed: usize, helpers: &[usize]) -> Result<Vec<usize>> {
    let n = code.n();
    if failed >= n {
        return Err(Error::NodeOutOfRange { node: failed, n });
    }
    let d = code.k() + delta - 1;
    if helpers.len() != d {
        return Err(Error::BadHelperSet(format!("need d = k + delta - 1 = {d} helpers, got {}", helpers.len())));
    }
    let mut seen = vec![false; n];
    for &h in helpers {
        if h >= n {
            return Err(Error::BadHelperSet(format!("helper {h} out of range for n = {n}")));
        }
        if h == failed {
            return Err(Error::BadHelperSet(format!("failed node {failed} listed as a helper")));
        }
        if std::mem::replace(&mut seen[h], true) {
            return Err(Error::BadHelperSet(format!("helper {h} listed twice")));
        }
    }
    Ok((0..n).filter(|&j| j != failed && !seen[j]).collect())
}

/// Precomputed repair of one node from one helper set.
///
/// `recover` maps the concatenated helper downloads (helper order as given,
/// each `|T|` symbols in ascending index order) to the failed node's shard.
#[derive(Debug, Clone)]
pub struct RepairSolver {
    field: Field,
    failed: usize,
    helpers: Vec<usize>,
    excluded: Vec<usize>,
    accessed: Vec<usize>,
    bound: usize,
    map: Matrix,
}

impl RepairSolver {
    pub fn new(code: &BlockParityCheckCode, delta: usize, plan: &RepairPlan, helpers: &[usize]) -> Result<Self> {
        let sub = code.sub_packetization();
        if plan.accessed.len() * delta != sub || plan.selected_rows.len() != plan.accessed.len() {
            return Err(Error::InvalidParameters(format!(
                "plan for node {} must select N/delta = {} symbols",
                plan.node,
                sub / delta
            )));
        }
        let excluded = validate_helpers(code, delta, plan.node, helpers)?;
        check_support(code, plan)?;
        let f = *code.field();
        let system = repair_matrix(code, plan, &excluded);
        let width = plan.accessed.len();
        let rows = &plan.selected_rows;
        let mut known = Matrix::zeros(system.rows(), helpers.len() * width);
        for t in 0..code.r() {
            for (c, &h) in helpers.iter().enumerate() {
                let part = code.block(t, h).select_rows(rows).select_cols(&plan.accessed);
                known.set_block(t * rows.len(), c * width, &part);
            }
        }
        let solved = system.solve(&known, &f)?;
        let map = solved.block(0, 0, sub, known.cols()).neg(&f);
        let d = helpers.len();
        Ok(RepairSolver {
            field: f,
            failed: plan.node,
            helpers: helpers.to_vec(),
            excluded,
            accessed: plan.accessed.clone(),
            bound: d * sub / (d - code.k() + 1),
            map,
        })
    }

    pub fn failed(&self) -> usize {
        self.failed
    }

    pub fn helpers(&self) -> &[usize] {
        &self.helpers
    }

    /// Survivors that are not contacted.
    pub fn excluded(&self) -> &[usize] {
        &self.excluded
    }

    /// Symbol indices read from every helper.
    pub fn accessed(&self) -> &[usize] {
        &self.accessed
    }

    pub fn recover(&self, downloads: &[u32]) -> Result<Vec<u32>> {
        self.map.mul_vec(downloads, &self.field)
    }

    /// Report for `stripes` independent repairs.
    pub fn report(&self, stripes: usize) -> BandwidthReport {
        let per = self.accessed.len() * stripes;
        BandwidthReport {
            failed: self.failed,
            helpers: self.helpers.clone(),
            downloaded_per_helper: per,
            accessed_per_helper: per,
            total_downloaded: per * self.helpers.len(),
            bound: self.bound * stripes,
        }
    }
}

/// Repairs `plan.node` of `word`, reading only `f_j[T]` from each helper.
/// The returned report counts the symbols actually read.
pub fn repair_node(
    code: &BlockParityCheckCode,
    delta: usize,
    plan: &RepairPlan,
    word: &Codeword,
    helpers: &[usize],
) -> Result<(Vec<u32>, BandwidthReport)> {
    let solver = RepairSolver::new(code, delta, plan, helpers)?;
    let mut reads = vec![0usize; helpers.len()];
    let mut downloads = Vec::with_capacity(helpers.len() * plan.accessed.len());
    for (c, &h) in helpers.iter().enumerate() {
        let shard = &word.shards[h];
        for &a in &plan.accessed {
            downloads.push(shard[a]);
            reads[c] += 1;
        }
    }
    let shard = solver.recover(&downloads)?;
    let per = reads[0];
    debug_assert!(reads.iter().all(|&r| r == per));
    let d = helpers.len();
    let report = BandwidthReport {
        failed: plan.node,
        helpers: helpers.to_vec(),
        downloaded_per_helper: per,
        accessed_per_helper: per,
        total_downloaded: reads.iter().sum(),
        bound: d * code.sub_packetization() / (d - code.k() + 1),
    };
    Ok((shard, report))
}

/// Repairs node `failed` of a built code.
pub fn repair(built: &AccessOptimalCode, word: &Codeword, failed: usize, helpers: &[usize]) -> Result<(Vec<u32>, BandwidthReport)> {
    let plan = built.repair_plan(failed)?;
    repair_node(&built.code, built.delta, plan, word, helpers)
}

/// The `d` lowest-indexed survivors of `failed`.
pub fn default_helpers(built: &AccessOptimalCode, failed: usize) -> Vec<usize> {
    (0..built.n()).filter(|&j| j != failed).take(built.helpers()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub node: usize,
    pub round: usize,
    pub goal_index: usize,
    pub accessed: Vec<usize>,
    pub rows: Vec<usize>,
    pub per_helper: usize,
    pub total: usize,
    pub bound: usize,
    pub optimal: bool,
}

/// One row per node: the plan, its per-helper and total download, and the
/// repair-bandwidth lower bound it is compared against.
pub fn audit(built: &AccessOptimalCode) -> Vec<AuditRow> {
    let d = built.helpers();
    let bound = built.bandwidth_bound();
    built
        .plans
        .iter()
        .map(|p| {
            let total = d * p.per_helper();
            AuditRow {
                node: p.node,
                round: p.round,
                goal_index: p.goal_index,
                accessed: p.accessed.clone(),
                rows: p.selected_rows.clone(),
                per_helper: p.per_helper(),
                total,
                bound,
                optimal: total == bound,
            }
        })
        .collect()
}

fn join(v: &[usize], offset: usize) -> String {
    let parts: Vec<String> = v.iter().map(|x| (x + offset).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Aligned text rendering of [`audit`]. With `one_indexed_rows` the row sets
/// are printed 1-based.
pub fn render_audit(rows: &[AuditRow], one_indexed_rows: bool) -> String {
    let offset = usize::from(one_indexed_rows);
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.node.to_string(),
                r.round.to_string(),
                r.goal_index.to_string(),
                join(&r.accessed, 0),
                join(&r.rows, offset),
                r.per_helper.to_string(),
                format!("{}/{}", r.total, r.bound),
                if r.optimal { "yes" } else { "NO" }.to_string(),
            ]
        })
        .collect();
    let header = ["node", "round", "goal", "accessed", "rows", "per_helper", "total/bound", "optimal"];
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cols: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cols.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    for row in &cells {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

/// Outcome of [`check_repair_systems`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairSystemsReport {
    pub systems_checked: usize,
    /// `(failed node, excluded set)` of the first singular system.
    pub witness: Option<(usize, Vec<usize>)>,
    /// Set when a plan fails the support check before any system is built.
    pub support_failure: Option<String>,
}

impl RepairSystemsReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none() && self.support_failure.is_none()
    }
}

/// For every planned node and every `(r − δ)`-subset of the other nodes,
/// checks that the repair system is nonsingular.
pub fn check_repair_systems_for(code: &BlockParityCheckCode, delta: usize, plans: &[RepairPlan]) -> RepairSystemsReport {
    let f = code.field();
    let mut checked = 0;
    for plan in plans {
        if let Err(e) = check_support(code, plan) {
            return RepairSystemsReport { systems_checked: checked, witness: None, support_failure: Some(e.to_string()) };
        }
        let others: Vec<usize> = (0..code.n()).filter(|&j| j != plan.node).collect();
        for pick in combinations(others.len(), code.r() - delta) {
            let excluded: Vec<usize> = pick.iter().map(|&p| others[p]).collect();
            let m = repair_matrix(code, plan, &excluded);
            checked += 1;
            if !m.is_square() || m.rank(f) < m.rows() {
                return RepairSystemsReport {
                    systems_checked: checked,
                    witness: Some((plan.node, excluded)),
                    support_failure: None,
                };
            }
        }
    }
    RepairSystemsReport { systems_checked: checked, witness: None, support_failure: None }
}

pub fn check_repair_systems(built: &AccessOptimalCode) -> RepairSystemsReport {
    check_repair_systems_for(&built.code, built.delta, &built.plans)
}
