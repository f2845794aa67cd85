//! Block parity-check codes.
//!
//! A code is an `r × n` grid of `N × N` blocks `A[t][i]` over `F_q`. A
//! codeword is `n` node shards `f_i` of `N` symbols each such that, for every
//! parity-check group `t`, `Σ_i A[t][i] · f_i = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subsets::combinations;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockParityCheckCode {
    field: Field,
    n: usize,
    k: usize,
    sub: usize,
    /// Row-major over `(t, i)`.
    blocks: Vec<Matrix>,
}

impl BlockParityCheckCode {
    /// Builds a code from its block grid (`blocks[t][i]`).
    pub fn new(field: Field, n: usize, k: usize, sub: usize, blocks: Vec<Vec<Matrix>>) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidParameters(format!("need 1 <= k < n, got n={n}, k={k}")));
        }
        if sub == 0 {
            return Err(Error::InvalidParameters("sub-packetization must be positive".into()));
        }
        let r = n - k;
        if blocks.len() != r || blocks.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(format!("block grid must be {r}x{n}")));
        }
        let blocks: Vec<Matrix> = blocks.into_iter().flatten().collect();
        for b in &blocks {
            if b.rows() != sub || b.cols() != sub {
                return Err(Error::Dimension(format!(
                    "block is {}x{}, expected {sub}x{sub}",
                    b.rows(),
                    b.cols()
                )));
            }
            if !b.is_reduced(&field) {
                return Err(Error::InvalidParameters(format!(
                    "block entry outside F_{}",
                    field.modulus()
                )));
            }
        }
        Ok(BlockParityCheckCode { field, n, k, sub, blocks })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.n - self.k
    }

    /// Symbols per node (`N`).
    pub fn sub_packetization(&self) -> usize {
        self.sub
    }

    /// The parity-check block of node `i` in group `t`.
    pub fn block(&self, t: usize, i: usize) -> &Matrix {
        &self.blocks[t * self.n + i]
    }

    #[cfg(test)]
    pub(crate) fn block_mut(&mut self, t: usize, i: usize) -> &mut Matrix {
        &mut self.blocks[t * self.n + i]
    }

    /// The `rN × |nodes|·N` matrix formed by the columns of `nodes`.
    pub fn stacked(&self, nodes: &[usize]) -> Matrix {
        let r = self.r();
        let mut out = Matrix::zeros(r * self.sub, nodes.len() * self.sub);
        for t in 0..r {
            for (c, &i) in nodes.iter().enumerate() {
                out.set_block(t * self.sub, c * self.sub, self.block(t, i));
            }
        }
        out
    }

    /// Checks that every `r`-subset of nodes has a nonsingular stacked block
    /// matrix. Subsets are visited in lexicographic order and the first
    /// failure is reported.
    pub fn is_mds(&self) -> MdsReport {
        let mut checked = 0;
        for subset in combinations(self.n, self.r()) {
            checked += 1;
            let m = self.stacked(&subset);
            if m.rank(&self.field) < m.rows() {
                return MdsReport { subsets_checked: checked, witness: Some(subset) };
            }
        }
        MdsReport { subsets_checked: checked, witness: None }
    }

    /// Systematic encoding: the message (`k·N` symbols) is copied verbatim
    /// into `systematic_nodes` in the given order and the remaining nodes are
    /// solved from the parity checks.
    pub fn encode(&self, message: &[u32], systematic_nodes: &[usize]) -> Result<Codeword> {
        if message.len() != self.k * self.sub {
            return Err(Error::Dimension(format!(
                "message has {} symbols, expected {}",
                message.len(),
                self.k * self.sub
            )));
        }
        let solver = ErasureSolver::new(self, systematic_nodes)?;
        Ok(solver.complete(message))
    }

    /// Encodes with the default systematic set `[0, k)`.
    pub fn encode_default(&self, message: &[u32]) -> Result<Codeword> {
        let nodes: Vec<usize> = (0..self.k).collect();
        self.encode(message, &nodes)
    }

    /// Recovers the full codeword from any `k` distinct node shards.
    pub fn decode_any_k(&self, available: &[(usize, Vec<u32>)]) -> Result<Codeword> {
        let nodes: Vec<usize> = available.iter().map(|(i, _)| *i).collect();
        let solver = ErasureSolver::new(self, &nodes)?;
        let mut known = Vec::with_capacity(self.k * self.sub);
        for (_, shard) in available {
            if shard.len() != self.sub {
                return Err(Error::Dimension(format!(
                    "shard has {} symbols, expected {}",
                    shard.len(),
                    self.sub
                )));
            }
            known.extend_from_slice(shard);
        }
        Ok(solver.complete(&known))
    }

    /// `Σ_i A[t][i] · f_i` for every group `t`.
    pub fn syndromes(&self, word: &Codeword) -> Result<Vec<Vec<u32>>> {
        if word.shards.len() != self.n || word.shards.iter().any(|s| s.len() != self.sub) {
            return Err(Error::Dimension("codeword shape does not match code".into()));
        }
        let f = &self.field;
        (0..self.r())
            .map(|t| {
                let mut acc = vec![0u32; self.sub];
                for (i, shard) in word.shards.iter().enumerate() {
                    let part = self.block(t, i).mul_vec(shard, f)?;
                    for (a, p) in acc.iter_mut().zip(part) {
                        *a = f.add(*a, p);
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &Codeword) -> bool {
        self.syndromes(word)
            .map(|s| s.iter().all(|g| g.iter().all(|&v| v == 0)))
            .unwrap_or(false)
    }

    pub fn to_document(&self) -> CodeDocument {
        let r = self.r();
        CodeDocument {
            q: self.field.modulus(),
            n: self.n,
            k: self.k,
            sub: self.sub,
            blocks: (0..r)
                .map(|t| (0..self.n).map(|i| self.block(t, i).to_rows()).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &CodeDocument) -> Result<Self> {
        let field = Field::new(doc.q as u64)?;
        let blocks = doc
            .blocks
            .iter()
            .map(|row| row.iter().map(|b| Matrix::from_rows(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, doc.n, doc.k, doc.sub, blocks)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

/// Serialized form of a [`BlockParityCheckCode`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    #[serde(rename = "N")]
    pub sub: usize,
    /// `blocks[t][i]` is an `N × N` array of rows.
    pub blocks: Vec<Vec<Vec<Vec<u32>>>>,
}

/// Result of [`BlockParityCheckCode::is_mds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsReport {
    pub subsets_checked: usize,
    /// First failing node subset, if any.
    pub witness: Option<Vec<usize>>,
}

impl MdsReport {
    pub fn is_mds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub shards: Vec<Vec<u32>>,
}

impl Codeword {
    pub fn zeros(n: usize, sub: usize) -> Self {
        Codeword { shards: vec![vec![0; sub]; n] }
    }
}

/// Precomputed linear map from `k` known node shards to the other `r`.
///
/// Solving `A_U · f_U = -A_K · f_K` once and keeping `-(A_U⁻¹ A_K)` lets
/// stripe-by-stripe encoding and decoding reduce to a matrix-vector product.
#[derive(Debug, Clone)]
pub struct ErasureSolver {
    field: Field,
    n: usize,
    sub: usize,
    known: Vec<usize>,
    unknown: Vec<usize>,
    map: Matrix,
}

impl ErasureSolver {
    pub fn new(code: &BlockParityCheckCode, known: &[usize]) -> Result<Self> {
        let n = code.n();
        if known.len() != code.k() {
            return Err(Error::InvalidParameters(format!(
                "need exactly k = {} known nodes, got {}",
                code.k(),
                known.len()
            )));
        }
        let mut seen = vec![false; n];
        for &i in known {
            if i >= n {
                return Err(Error::NodeOutOfRange { node: i, n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameters(format!("node {i} listed twice")));
            }
        }
        let unknown: Vec<usize> = (0..n).filter(|&i| !seen[i]).collect();
        let f = code.field();
        let a_u = code.stacked(&unknown);
        let a_k = code.stacked(known);
        let map = a_u.solve(&a_k, f)?.neg(f);
        Ok(ErasureSolver {
            field: *f,
            n,
            sub: code.sub_packetization(),
            known: known.to_vec(),
            unknown,
            map,
        })
    }

    pub fn known(&self) -> &[usize] {
        &self.known
    }

    pub fn unknown(&self) -> &[usize] {
        &self.unknown
    }

    /// Shards of the unknown nodes (concatenated in `unknown()` order).
    pub fn solve_unknown(&self, known_symbols: &[u32]) -> Vec<u32> {
        self.map
            .mul_vec(known_symbols, &self.field)
            .expect("known symbol count checked by caller")
    }

    /// Full codeword from the concatenated known shards.
    pub fn complete(&self, known_symbols: &[u32]) -> Codeword {
        let solved = self.solve_unknown(known_symbols);
        let mut word = Codeword::zeros(self.n, self.sub);
        for (c, &i) in self.known.iter().enumerate() {
            word.shards[i].copy_from_slice(&known_symbols[c * self.sub..(c + 1) * self.sub]);
        }
        for (c, &i) in self.unknown.iter().enumerate() {
            word.shards[i].copy_from_slice(&solved[c * self.sub..(c + 1) * self.sub]);
        }
        word
    }
}

/// Scalar (`N = 1`) Vandermonde code with `A[t][i] = (i + 1)^t`.
pub fn vandermonde_code(n_prime: usize, r: usize, field: Field) -> Result<BlockParityCheckCode> {
    let needed = n_prime as u64 + 1;
    if (field.modulus() as u64) < needed {
        return Err(Error::FieldTooSmall { q: field.modulus(), needed });
    }
    let points: Vec<u32> = (1..=n_prime as u32).collect();
    vandermonde_with_points(&points, r, field)
}

/// Scalar Vandermonde code over caller-chosen evaluation points. Points must
/// be distinct elements of the field for the result to be MDS; that is not
/// checked here.
pub fn vandermonde_with_points(points: &[u32], r: usize, field: Field) -> Result<BlockParityCheckCode> {
    let n = points.len();
    if r == 0 || r >= n {
        return Err(Error::InvalidParameters(format!("need 1 <= r < n, got n={n}, r={r}")));
    }
    if let Some(&p) = points.iter().find(|&&p| !field.contains(p)) {
        return Err(Error::InvalidParameters(format!(
            "evaluation point {p} outside F_{}",
            field.modulus()
        )));
    }
    let blocks = (0..r)
        .map(|t| points.iter().map(|&p| Matrix::scalar(1, field.pow(p, t as u64))).collect())
        .collect();
    BlockParityCheckCode::new(field, n, n - r, 1, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::combinations;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f17() -> Field {
        Field::new(17).unwrap()
    }

    #[test]
    fn vandermonde_coefficients() {
        let f = f17();
        let code = vandermonde_code(16, 3, f).unwrap();
        assert_eq!(code.n(), 16);
        assert_eq!(code.k(), 13);
        assert_eq!(code.block(1, 1).get(0, 0), 2);
        assert_eq!(code.block(1, 15).get(0, 0), 16);
        assert_eq!(code.block(2, 15).get(0, 0), (16 * 16) % 17);
        for i in 0..16 {
            assert_eq!(code.block(0, i).get(0, 0), 1);
        }
    }

    #[test]
    fn vandermonde_needs_room_for_points() {
        assert!(matches!(
            vandermonde_code(17, 3, f17()),
            Err(Error::FieldTooSmall { q: 17, needed: 18 })
        ));
        assert!(vandermonde_code(16, 3, f17()).is_ok());
    }

    #[test]
    fn vandermonde_is_mds() {
        let report = vandermonde_code(16, 3, f17()).unwrap().is_mds();
        assert!(report.is_mds());
        assert_eq!(report.subsets_checked, 560);
        for (n, r) in [(5, 2), (7, 4), (10, 3)] {
            assert!(vandermonde_code(n, r, Field::new(11).unwrap()).unwrap().is_mds().is_mds());
        }
    }

    #[test]
    fn duplicated_points_fail_with_witness() {
        let code = vandermonde_with_points(&[1, 2, 3, 3, 5], 2, f17()).unwrap();
        let report = code.is_mds();
        assert!(!report.is_mds());
        assert_eq!(report.witness, Some(vec![2, 3]));
    }

    #[test]
    fn constructor_validates_shape() {
        let f = f17();
        let one = Matrix::identity(1);
        assert!(BlockParityCheckCode::new(f, 3, 3, 1, vec![]).is_err());
        assert!(BlockParityCheckCode::new(f, 3, 2, 1, vec![vec![one.clone(); 2]]).is_err());
        assert!(BlockParityCheckCode::new(f, 3, 2, 2, vec![vec![one.clone(); 3]]).is_err());
        let bad = Matrix::scalar(1, 17);
        assert!(BlockParityCheckCode::new(f, 2, 1, 1, vec![vec![one, bad]]).is_err());
    }

    #[test]
    fn zero_message_encodes_to_zero() {
        let code = vandermonde_code(8, 3, f17()).unwrap();
        let word = code.encode_default(&[0; 5]).unwrap();
        assert_eq!(word, Codeword::zeros(8, 1));
    }

    #[test]
    fn encode_places_message_and_satisfies_checks() {
        let code = vandermonde_code(10, 4, f17()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let msg: Vec<u32> = (0..6).map(|_| rng.gen_range(0..17)).collect();
        let systematic = [9, 0, 4, 2, 7, 5];
        let word = code.encode(&msg, &systematic).unwrap();
        for (c, &i) in systematic.iter().enumerate() {
            assert_eq!(word.shards[i], vec![msg[c]]);
        }
        assert!(code.is_codeword(&word));
    }

    #[test]
    fn encode_rejects_bad_input() {
        let code = vandermonde_code(6, 2, f17()).unwrap();
        assert!(matches!(code.encode(&[1, 2, 3], &[0, 1, 2, 3]), Err(Error::Dimension(_))));
        assert!(code.encode(&[1, 2, 3, 4], &[0, 1, 2]).is_err());
        assert!(code.encode(&[1, 2, 3, 4], &[0, 1, 2, 2]).is_err());
        assert!(matches!(
            code.encode(&[1, 2, 3, 4], &[0, 1, 2, 6]),
            Err(Error::NodeOutOfRange { node: 6, n: 6 })
        ));
    }

    #[test]
    fn decode_from_every_k_subset() {
        let code = vandermonde_code(8, 3, f17()).unwrap();
        let word = code.encode_default(&[3, 1, 4, 1, 5]).unwrap();
        for subset in combinations(8, 5) {
            let avail: Vec<_> = subset.iter().map(|&i| (i, word.shards[i].clone())).collect();
            assert_eq!(code.decode_any_k(&avail).unwrap(), word);
        }
    }

    #[test]
    fn decode_on_non_mds_code_is_singular() {
        let code = vandermonde_with_points(&[1, 2, 2, 4], 2, f17()).unwrap();
        let avail = vec![(0, vec![1]), (3, vec![2])];
        assert!(matches!(code.decode_any_k(&avail), Err(Error::Singular)));
    }

    #[test]
    fn json_roundtrip_preserves_code() {
        let code = vandermonde_code(6, 2, f17()).unwrap();
        let json = code.to_json().unwrap();
        assert!(json.starts_with(r#"{"q":17,"n":6,"k":4,"N":1,"blocks":"#));
        assert_eq!(BlockParityCheckCode::from_json(&json).unwrap(), code);
    }

    #[test]
    fn json_rejects_composite_modulus() {
        let mut doc = vandermonde_code(4, 2, f17()).unwrap().to_document();
        doc.q = 16;
        assert!(matches!(BlockParityCheckCode::from_document(&doc), Err(Error::NotPrime(16))));
    }
}
