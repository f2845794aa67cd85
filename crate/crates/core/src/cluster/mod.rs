//! Directory-backed cluster simulation.
//!
//! A cluster directory holds `manifest.json` and one `node-XX/shard.bin` per
//! node. Input files are packed into symbols, cut into stripes of `k·N`
//! symbols, and each stripe is encoded systematically onto nodes `[0, k)`.

pub mod packing;
pub mod shard;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::builder::{AccessOptimalCode, AccessOptimalDocument};
use crate::code::ErasureSolver;
use crate::error::{Error, Result};
use crate::repair::{BandwidthReport, RepairSolver};

pub use packing::Packing;
use shard::{read_shard, runs, write_atomic, write_shard, ShardHeader, ShardReader, SYMBOL_BYTES};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub code: AccessOptimalDocument,
    pub file_name: String,
    /// SHA-256 of the original file, hex.
    pub checksum: String,
    pub original_length: u64,
    pub stripe_count: u32,
    pub packing: Packing,
}

/// A cluster directory with its parsed manifest and code.
#[derive(Debug, Clone)]
pub struct Cluster {
    root: PathBuf,
    manifest: Manifest,
    code: AccessOptimalCode,
}

/// What a cluster-level repair did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOutcome {
    /// Symbol counts summed over all stripes.
    pub report: BandwidthReport,
    pub stripes: usize,
    /// Bytes actually read from helper shard bodies.
    pub bytes_read: u64,
}

impl RepairOutcome {
    pub fn bytes_downloaded(&self) -> u64 {
        (self.report.total_downloaded * SYMBOL_BYTES) as u64
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn node_dir(root: &Path, node: usize) -> PathBuf {
    root.join(format!("node-{node:02}"))
}

pub fn shard_path(root: &Path, node: usize) -> PathBuf {
    node_dir(root, node).join("shard.bin")
}

pub fn load_code(path: &Path) -> Result<AccessOptimalCode> {
    AccessOptimalCode::from_json(&fs::read_to_string(path)?)
}

fn to_u16(v: usize, what: &str) -> Result<u16> {
    u16::try_from(v).map_err(|_| Error::InvalidParameters(format!("{what} = {v} does not fit the shard header")))
}

/// Splits `data` into stripes, encodes them, and writes a fresh cluster
/// under `root`.
pub fn ingest(code: &AccessOptimalCode, file_name: &str, data: &[u8], root: &Path) -> Result<Cluster> {
    let c = &code.code;
    let packing = Packing::for_modulus(c.field().modulus())?;
    let (n, k, sub) = (c.n(), c.k(), c.sub_packetization());
    let stripe_symbols = k * sub;
    let mut symbols = packing.pack(data);
    let stripe_count = symbols.len().div_ceil(stripe_symbols);
    symbols.resize(stripe_count * stripe_symbols, 0);
    let stripe_count_u32 = u32::try_from(stripe_count)
        .map_err(|_| Error::InvalidParameters("input needs more than 2^32 stripes".into()))?;

    let systematic: Vec<usize> = (0..k).collect();
    let solver = ErasureSolver::new(c, &systematic)?;
    let mut bodies: Vec<Vec<u32>> = vec![Vec::with_capacity(stripe_count * sub); n];
    for stripe in symbols.chunks_exact(stripe_symbols) {
        for (i, body) in bodies.iter_mut().take(k).enumerate() {
            body.extend_from_slice(&stripe[i * sub..(i + 1) * sub]);
        }
        let parity = solver.solve_unknown(stripe);
        for (p, &node) in solver.unknown().iter().enumerate() {
            bodies[node].extend_from_slice(&parity[p * sub..(p + 1) * sub]);
        }
    }

    let manifest = Manifest {
        code: code.to_document(),
        file_name: file_name.to_string(),
        checksum: sha256_hex(data),
        original_length: data.len() as u64,
        stripe_count: stripe_count_u32,
        packing,
    };
    let cluster = Cluster { root: root.to_path_buf(), manifest, code: code.clone() };
    fs::create_dir_all(root)?;
    for (node, body) in bodies.iter().enumerate() {
        write_shard(&shard_path(root, node), &cluster.header_for(node)?, body)?;
    }
    write_atomic(&root.join(MANIFEST), serde_json::to_string_pretty(&cluster.manifest)?.as_bytes())?;
    Ok(cluster)
}

impl Cluster {
    pub fn open(root: &Path) -> Result<Self> {
        let manifest: Manifest = serde_json::from_str(&fs::read_to_string(root.join(MANIFEST))?)?;
        let code = AccessOptimalCode::from_document(&manifest.code)?;
        let expected = (manifest.original_length as usize * manifest.packing.symbols_per_byte())
            .div_ceil(code.k() * code.code.sub_packetization());
        if expected != manifest.stripe_count as usize {
            return Err(Error::CodeMismatch(format!(
                "manifest lists {} stripes, length implies {expected}",
                manifest.stripe_count
            )));
        }
        if Packing::for_modulus(code.code.field().modulus())? != manifest.packing {
            return Err(Error::CodeMismatch("packing does not match the field".into()));
        }
        Ok(Cluster { root: root.to_path_buf(), manifest, code })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn code(&self) -> &AccessOptimalCode {
        &self.code
    }

    pub fn stripes(&self) -> usize {
        self.manifest.stripe_count as usize
    }

    pub fn header_for(&self, node: usize) -> Result<ShardHeader> {
        let c = &self.code;
        Ok(ShardHeader {
            q: c.code.field().modulus(),
            n: to_u16(c.n(), "n")?,
            k: to_u16(c.k(), "k")?,
            delta: to_u16(c.delta, "delta")?,
            tau: to_u16(c.tau, "tau")?,
            node_id: to_u16(node, "node")?,
            stripe_count: self.manifest.stripe_count,
            original_length: self.manifest.original_length,
        })
    }

    fn check_header(&self, node: usize, h: &ShardHeader) -> Result<()> {
        let want = self.header_for(node)?;
        if *h != want {
            return Err(Error::CodeMismatch(format!("shard header of node {node} is {h:?}, manifest implies {want:?}")));
        }
        Ok(())
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node >= self.code.n() {
            return Err(Error::NodeOutOfRange { node, n: self.code.n() });
        }
        Ok(())
    }

    pub fn is_present(&self, node: usize) -> bool {
        shard_path(&self.root, node).is_file()
    }

    /// Nodes whose shard file exists.
    pub fn present(&self) -> Vec<usize> {
        (0..self.code.n()).filter(|&i| self.is_present(i)).collect()
    }

    pub fn read_node(&self, node: usize) -> Result<Vec<u32>> {
        self.check_node(node)?;
        let (h, body) = read_shard(&shard_path(&self.root, node), self.code.code.sub_packetization())?;
        self.check_header(node, &h)?;
        Ok(body)
    }

    /// Deletes a node's shard.
    pub fn kill(&self, node: usize) -> Result<()> {
        self.check_node(node)?;
        let path = shard_path(&self.root, node);
        if !path.is_file() {
            return Err(Error::InvalidParameters(format!("node {node} is already down")));
        }
        fs::remove_file(path)?;
        Ok(())
    }

    /// Rebuilds `node` stripe by stripe from `d = k + δ − 1` helpers. With
    /// `helpers = None` the lowest-indexed live survivors are used.
    pub fn repair(&self, node: usize, helpers: Option<&[usize]>, force: bool) -> Result<RepairOutcome> {
        self.check_node(node)?;
        if self.is_present(node) && !force {
            return Err(Error::NodeHealthy(node));
        }
        let d = self.code.helpers();
        let live: Vec<usize> = self.present().into_iter().filter(|&j| j != node).collect();
        let helpers: Vec<usize> = match helpers {
            Some(h) => {
                if h.len() < d {
                    return Err(Error::TooFewSurvivors { needed: d, available: h.len() });
                }
                if let Some(dead) = h.iter().find(|j| !live.contains(j)) {
                    return Err(Error::BadHelperSet(format!("helper {dead} is not a live survivor")));
                }
                h.to_vec()
            }
            None => {
                if live.len() < d {
                    return Err(Error::TooFewSurvivors { needed: d, available: live.len() });
                }
                live[..d].to_vec()
            }
        };
        let plan = self.code.repair_plan(node)?;
        let solver = RepairSolver::new(&self.code.code, self.code.delta, plan, &helpers)?;
        let sub = self.code.code.sub_packetization();
        let mut readers = helpers
            .iter()
            .map(|&h| {
                let r = ShardReader::open(&shard_path(&self.root, h), sub)?;
                self.check_header(h, r.header())?;
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        let access_runs = runs(solver.accessed());
        let stripes = self.stripes();
        let mut body = Vec::with_capacity(stripes * sub);
        let mut downloads = Vec::with_capacity(helpers.len() * solver.accessed().len());
        for stripe in 0..stripes {
            downloads.clear();
            for r in readers.iter_mut() {
                r.read_runs(stripe, &access_runs, &mut downloads)?;
            }
            body.extend(solver.recover(&downloads)?);
        }
        write_shard(&shard_path(&self.root, node), &self.header_for(node)?, &body)?;
        let bytes_read = readers.iter().map(ShardReader::bytes_read).sum();
        Ok(RepairOutcome { report: solver.report(stripes), stripes, bytes_read })
    }

    /// Recovers the original file from `k` live nodes (`nodes`, or the
    /// lowest-indexed live ones) and checks it against the manifest checksum.
    pub fn reassemble(&self, nodes: Option<&[usize]>) -> Result<Vec<u8>> {
        let k = self.code.k();
        let live = self.present();
        let chosen: Vec<usize> = match nodes {
            Some(list) => {
                if let Some(dead) = list.iter().find(|j| !live.contains(j)) {
                    return Err(Error::InvalidParameters(format!("node {dead} has no shard")));
                }
                if list.len() < k {
                    return Err(Error::TooFewSurvivors { needed: k, available: list.len() });
                }
                list[..k].to_vec()
            }
            None => {
                if live.len() < k {
                    return Err(Error::TooFewSurvivors { needed: k, available: live.len() });
                }
                live[..k].to_vec()
            }
        };
        let sub = self.code.code.sub_packetization();
        let bodies = chosen.iter().map(|&i| self.read_node(i)).collect::<Result<Vec<_>>>()?;
        let solver = ErasureSolver::new(&self.code.code, &chosen)?;
        let mut symbols = Vec::with_capacity(self.stripes() * k * sub);
        let mut known = Vec::with_capacity(k * sub);
        for stripe in 0..self.stripes() {
            known.clear();
            for b in &bodies {
                known.extend_from_slice(&b[stripe * sub..(stripe + 1) * sub]);
            }
            let word = solver.complete(&known);
            for shard in word.shards.iter().take(k) {
                symbols.extend_from_slice(shard);
            }
        }
        let mut data = self.manifest.packing.unpack(&symbols)?;
        data.truncate(self.manifest.original_length as usize);
        if sha256_hex(&data) != self.manifest.checksum {
            return Err(Error::CodeMismatch("reassembled data does not match the manifest checksum".into()));
        }
        Ok(data)
    }
}
