//! Planted instances with permutation-invariant noise.
//!
//! An instance is `F = G ⊞_π H`: a planted graph `G` with no edge across the
//! hidden bisection `(L, R)`, a noise graph `H`, and a bijection `π` drawn
//! uniformly from the side-preserving bijections. The edge set of `F` is the
//! set union `E_G ∪ π(E_H)`; edges present in both collapse to one and are
//! counted in `overlap_edges`.
//!
//! After composition the vertex ids are shuffled once more so the hidden
//! sides are not recoverable from the numbering.

pub mod models;
mod properties;

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::config::KvConfig;
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph};
use crate::rng::{seeded, Rng};

pub use properties::{check_property3, check_property4, Property4Report, Property4Violation};

/// `pi[x]` is the image of noise vertex `x`.
pub type Bijection = Vec<usize>;

/// Uniform bijection mapping `0..n/2` onto itself and `n/2..n` onto itself.
pub fn sample_pi(n: usize, seed: u64) -> Result<Bijection> {
    sample_pi_with(n, &mut seeded(seed, 0x7069))
}

fn sample_pi_with(n: usize, rng: &mut Rng) -> Result<Bijection> {
    if n % 2 != 0 {
        return Err(Error::OddVertexCount(n));
    }
    let half = n / 2;
    let mut pi: Vec<usize> = (0..n).collect();
    pi[..half].shuffle(rng);
    pi[half..].shuffle(rng);
    Ok(pi)
}

/// Union of `g` and the image of `h` under `pi`, all on the same id space.
pub fn compose(g: &Graph, h: &Graph, pi: &[usize]) -> Result<Graph> {
    let parts = compose_parts(g, h, pi)?;
    let mut all = parts.planted;
    all.extend_from(&parts.noise_only);
    Graph::from_edge_set(g.n_total(), &all)
}

struct Composition {
    planted: EdgeSet,
    noise_only: EdgeSet,
    overlap: EdgeSet,
}

fn compose_parts(g: &Graph, h: &Graph, pi: &[usize]) -> Result<Composition> {
    let n = g.n_total();
    if h.n_total() != n {
        return Err(Error::SizeMismatch(n, h.n_total()));
    }
    if pi.len() != n {
        return Err(Error::SizeMismatch(n, pi.len()));
    }
    let planted = g.edge_set();
    let mut noise_only = EdgeSet::new();
    let mut overlap = EdgeSet::new();
    for e in h.edges() {
        let img = Edge::new(pi[e.u()], pi[e.v()]);
        if planted.contains(&img) {
            overlap.insert(img);
        } else {
            noise_only.insert(img);
        }
    }
    Ok(Composition { planted, noise_only, overlap })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum PlantedModel {
    /// Independent random `degree`-regular graphs on each side.
    TwoRandomRegular { degree: usize },
    TwoGrids,
    TwoCliques,
    /// Edge list on `n` vertices whose sides are `0..n/2` and `n/2..n`.
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum NoiseModel {
    ErdosRenyi { p: f64 },
    /// Each `(L_H, R_H)` pair with probability `q`.
    BipartiteCrossing { q: f64 },
    PreferentialAttachment { m: usize },
    File { path: PathBuf },
    Empty,
}

impl NoiseModel {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::ErdosRenyi { .. } => "erdos-renyi",
            NoiseModel::BipartiteCrossing { .. } => "bipartite-crossing",
            NoiseModel::PreferentialAttachment { .. } => "preferential-attachment",
            NoiseModel::File { .. } => "file",
            NoiseModel::Empty => "empty",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub planted: PlantedModel,
    pub noise: NoiseModel,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n % 2 != 0 {
            return Err(Error::OddVertexCount(self.n));
        }
        match self.noise {
            NoiseModel::ErdosRenyi { p } if !(0.0..=1.0).contains(&p) => {
                Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")))
            }
            NoiseModel::BipartiteCrossing { q } if !(0.0..=1.0).contains(&q) => {
                Err(Error::InvalidParameter(format!("q = {q} is not in [0, 1]")))
            }
            NoiseModel::PreferentialAttachment { m: 0 } => {
                Err(Error::InvalidParameter("preferential attachment m must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    /// Reads a spec from `key = value` entries:
    ///
    /// ```text
    /// n = 256
    /// g_model = two-random-regular   # or two-grids, two-cliques, file
    /// g_degree = 8
    /// g_file = planted.edges
    /// h_model = erdos-renyi          # or bipartite-crossing, preferential-attachment, file, empty
    /// h_p = 0.0157                   # or h_avg_degree = 4
    /// h_q = 0.1
    /// h_m = 3
    /// h_file = noise.edges
    /// seed = 1
    /// ```
    pub fn from_config(cfg: &KvConfig) -> Result<Self> {
        let n: usize = cfg.require("n")?;
        let planted = match cfg.raw("g_model").unwrap_or("two-random-regular") {
            "two-random-regular" => PlantedModel::TwoRandomRegular { degree: cfg.require("g_degree")? },
            "two-grids" => PlantedModel::TwoGrids,
            "two-cliques" => PlantedModel::TwoCliques,
            "file" => PlantedModel::File { path: cfg.require::<String>("g_file")?.into() },
            other => return Err(Error::InvalidParameter(format!("unknown g_model {other:?}"))),
        };
        let noise = match cfg.raw("h_model").unwrap_or("erdos-renyi") {
            "erdos-renyi" => {
                let p = match cfg.get::<f64>("h_p")? {
                    Some(p) => p,
                    None => {
                        let avg: f64 = cfg.require("h_avg_degree")?;
                        if n < 2 { 0.0 } else { avg / (n - 1) as f64 }
                    }
                };
                NoiseModel::ErdosRenyi { p }
            }
            "bipartite-crossing" => NoiseModel::BipartiteCrossing { q: cfg.require("h_q")? },
            "preferential-attachment" => NoiseModel::PreferentialAttachment { m: cfg.require("h_m")? },
            "file" => NoiseModel::File { path: cfg.require::<String>("h_file")?.into() },
            "empty" => NoiseModel::Empty,
            other => return Err(Error::InvalidParameter(format!("unknown h_model {other:?}"))),
        };
        let spec = GeneratorSpec { n, planted, noise, seed: cfg.get_or("seed", 0)? };
        spec.validate()?;
        Ok(spec)
    }
}

/// The public graph together with the hidden ground truth.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub f: Graph,
    /// Sorted ids of the hidden left side.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `E_G`.
    pub planted_edges: EdgeSet,
    /// `π(E_H) \ E_G`.
    pub noise_edges: EdgeSet,
    /// `π(E_H) ∩ E_G`.
    pub overlap_edges: EdgeSet,
    /// Noise vertex `x` sits at vertex `pi[x]` of `F`.
    pub pi: Bijection,
    pub seed: u64,
    pub spec: GeneratorSpec,
}

impl PlantedInstance {
    pub fn n(&self) -> usize {
        self.f.n_total()
    }

    pub fn left_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n()];
        for &v in &self.left {
            mask[v] = true;
        }
        mask
    }

    /// `|E_H|`, overlaps included.
    pub fn noise_count(&self) -> usize {
        self.noise_edges.len() + self.overlap_edges.len()
    }

    /// `π(E_H)` as a graph on the ids of `F`.
    pub fn noise_graph(&self) -> Graph {
        let mut all = self.noise_edges.clone();
        all.extend_from(&self.overlap_edges);
        Graph::from_edge_set(self.n(), &all).expect("noise edges within id space")
    }

    pub fn planted_graph(&self) -> Graph {
        Graph::from_edge_set(self.n(), &self.planted_edges).expect("planted edges within id space")
    }

    /// Edges of `F` across the hidden bisection; all of them are noise.
    pub fn crossing_noise(&self) -> usize {
        let mask = self.left_mask();
        self.noise_edges
            .iter()
            .filter(|e| mask[e.u()] != mask[e.v()])
            .count()
    }

    fn validate(&self) -> Result<()> {
        let mask = self.left_mask();
        if self.left.len() * 2 != self.n() || self.left.len() + self.right.len() != self.n() {
            return Err(Error::Invariant("hidden sides are not a bisection".into()));
        }
        if let Some(e) = self.planted_edges.iter().find(|e| mask[e.u()] != mask[e.v()]) {
            return Err(Error::Invariant(format!(
                "planted edge ({}, {}) crosses the hidden cut",
                e.u(),
                e.v()
            )));
        }
        let half = self.n() / 2;
        if self.pi.iter().enumerate().any(|(x, &v)| (x < half) != mask[v]) {
            return Err(Error::Invariant("π does not preserve sides".into()));
        }
        if self.f.edge_count() != self.planted_edges.len() + self.noise_edges.len() {
            return Err(Error::Invariant("F is not the union of planted and noise edges".into()));
        }
        Ok(())
    }
}

fn planted_canonical(spec: &GeneratorSpec, rng: &mut Rng) -> Result<EdgeSet> {
    let n = spec.n;
    let left: Vec<usize> = (0..n / 2).collect();
    let right: Vec<usize> = (n / 2..n).collect();
    let mut edges = match &spec.planted {
        PlantedModel::TwoRandomRegular { degree } => {
            let mut e = models::random_regular(&left, *degree, rng)?;
            e.extend_from(&models::random_regular(&right, *degree, rng)?);
            e
        }
        PlantedModel::TwoGrids => {
            let mut e = models::grid(&left);
            e.extend_from(&models::grid(&right));
            e
        }
        PlantedModel::TwoCliques => {
            let mut e = models::clique(&left);
            e.extend_from(&models::clique(&right));
            e
        }
        PlantedModel::File { path } => {
            let g = read_sized(path, n)?;
            g.edge_set()
        }
    };
    if let Some(e) = edges.iter().find(|e| (e.u() < n / 2) != (e.v() < n / 2)) {
        return Err(Error::InfeasibleModel(format!(
            "planted edge ({}, {}) crosses the sides 0..{} / {}..{}",
            e.u(),
            e.v(),
            n / 2,
            n / 2,
            n
        )));
    }
    edges = edges.into_iter().collect();
    Ok(edges)
}

fn noise_canonical(spec: &GeneratorSpec, rng: &mut Rng) -> Result<EdgeSet> {
    let n = spec.n;
    match &spec.noise {
        NoiseModel::ErdosRenyi { p } => models::erdos_renyi(n, *p, rng),
        NoiseModel::BipartiteCrossing { q } => models::bipartite_crossing(n, *q, rng),
        NoiseModel::PreferentialAttachment { m } => models::preferential_attachment(n, *m, rng),
        NoiseModel::File { path } => Ok(read_sized(path, n)?.edge_set()),
        NoiseModel::Empty => Ok(EdgeSet::new()),
    }
}

fn read_sized(path: &Path, n: usize) -> Result<Graph> {
    let g = Graph::read_edge_list(path)?;
    if g.n_total() != n {
        return Err(Error::SizeMismatch(n, g.n_total()));
    }
    Ok(g)
}

/// Samples a planted instance. Deterministic in `spec` (including its seed).
pub fn generate(spec: &GeneratorSpec) -> Result<PlantedInstance> {
    spec.validate()?;
    let n = spec.n;
    let g = Graph::from_edge_set(n, &planted_canonical(spec, &mut seeded(spec.seed, 1))?)?;
    let h = Graph::from_edge_set(n, &noise_canonical(spec, &mut seeded(spec.seed, 2))?)?;
    let pi = sample_pi_with(n, &mut seeded(spec.seed, 3))?;
    let parts = compose_parts(&g, &h, &pi)?;

    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(&mut seeded(spec.seed, 4));
    let map = |set: &EdgeSet| -> EdgeSet {
        set.iter()
            .map(|e| Edge::new(relabel[e.u()], relabel[e.v()]))
            .collect()
    };
    let planted_edges = map(&parts.planted);
    let noise_edges = map(&parts.noise_only);
    let overlap_edges = map(&parts.overlap);
    let mut all = planted_edges.clone();
    all.extend_from(&noise_edges);

    let mut left: Vec<usize> = relabel[..n / 2].to_vec();
    let mut right: Vec<usize> = relabel[n / 2..].to_vec();
    left.sort_unstable();
    right.sort_unstable();
    let inst = PlantedInstance {
        f: Graph::from_edge_set(n, &all)?,
        left,
        right,
        planted_edges,
        noise_edges,
        overlap_edges,
        pi: pi.iter().map(|&v| relabel[v]).collect(),
        seed: spec.seed,
        spec: spec.clone(),
    };
    inst.validate()?;
    Ok(inst)
}

#[derive(Serialize, Deserialize)]
struct EdgeFileRef {
    count: usize,
    file: String,
}

#[derive(Serialize, Deserialize)]
struct Truth {
    n: usize,
    seed: u64,
    left: Vec<usize>,
    planted_edges: EdgeFileRef,
    noise_edges: EdgeFileRef,
    overlap_edges: EdgeFileRef,
    overlap_count: usize,
    pi: Vec<usize>,
    generator_params: GeneratorSpec,
}

const GRAPH_FILE: &str = "graph.edges";
const TRUTH_FILE: &str = "truth.json";
const PLANTED_FILE: &str = "planted.edges";
const NOISE_FILE: &str = "noise.edges";
const OVERLAP_FILE: &str = "overlap.edges";

/// Writes the bundle directory: the public `graph.edges` plus ground truth
/// kept apart in `truth.json` and its referenced edge files.
pub fn write_bundle(inst: &PlantedInstance, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    inst.f.write_edge_list(dir.join(GRAPH_FILE))?;
    let n = inst.n();
    Graph::from_edge_set(n, &inst.planted_edges)?.write_edge_list(dir.join(PLANTED_FILE))?;
    Graph::from_edge_set(n, &inst.noise_edges)?.write_edge_list(dir.join(NOISE_FILE))?;
    Graph::from_edge_set(n, &inst.overlap_edges)?.write_edge_list(dir.join(OVERLAP_FILE))?;
    let truth = Truth {
        n,
        seed: inst.seed,
        left: inst.left.clone(),
        planted_edges: EdgeFileRef { count: inst.planted_edges.len(), file: PLANTED_FILE.into() },
        noise_edges: EdgeFileRef { count: inst.noise_edges.len(), file: NOISE_FILE.into() },
        overlap_edges: EdgeFileRef { count: inst.overlap_edges.len(), file: OVERLAP_FILE.into() },
        overlap_count: inst.overlap_edges.len(),
        pi: inst.pi.clone(),
        generator_params: inst.spec.clone(),
    };
    fs::write(dir.join(TRUTH_FILE), serde_json::to_string_pretty(&truth)?)?;
    Ok(())
}

/// Path of the public graph inside a bundle.
pub fn bundle_graph_path(dir: impl AsRef<Path>) -> PathBuf {
    dir.as_ref().join(GRAPH_FILE)
}

pub fn read_bundle(dir: impl AsRef<Path>) -> Result<PlantedInstance> {
    let dir = dir.as_ref();
    let f = Graph::read_edge_list(dir.join(GRAPH_FILE))?;
    let truth: Truth = serde_json::from_str(&fs::read_to_string(dir.join(TRUTH_FILE))?)?;
    let edges = |r: &EdgeFileRef| -> Result<EdgeSet> {
        let g = Graph::read_edge_list(dir.join(&r.file))?;
        if g.edge_count() != r.count {
            return Err(Error::Invariant(format!("{} has {} edges, expected {}", r.file, g.edge_count(), r.count)));
        }
        Ok(g.edge_set())
    };
    let left_mask = {
        let mut m = vec![false; truth.n];
        for &v in &truth.left {
            m[v] = true;
        }
        m
    };
    let inst = PlantedInstance {
        right: (0..truth.n).filter(|&v| !left_mask[v]).collect(),
        left: truth.left,
        planted_edges: edges(&truth.planted_edges)?,
        noise_edges: edges(&truth.noise_edges)?,
        overlap_edges: edges(&truth.overlap_edges)?,
        pi: truth.pi,
        seed: truth.seed,
        spec: truth.generator_params,
        f,
    };
    inst.validate()?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, planted: PlantedModel, noise: NoiseModel) -> GeneratorSpec {
        GeneratorSpec { n, planted, noise, seed: 7 }
    }

    #[test]
    fn pi_small_cases() {
        assert_eq!(sample_pi(2, 5).unwrap(), vec![0, 1]);
        assert_eq!(sample_pi(40, 11).unwrap(), sample_pi(40, 11).unwrap());
        assert!(matches!(sample_pi(5, 0), Err(Error::OddVertexCount(5))));
        let pi = sample_pi(10, 3).unwrap();
        assert!(pi[..5].iter().all(|&v| v < 5));
        let mut sorted = pi.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn compose_identities() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let empty = Graph::empty(4);
        let id: Vec<usize> = (0..4).collect();
        assert_eq!(compose(&g, &empty, &id).unwrap(), g);
        assert_eq!(compose(&empty, &g, &id).unwrap(), g);
        assert!(compose(&g, &Graph::empty(6), &id).is_err());
    }

    #[test]
    fn two_cliques_without_noise() {
        let inst = generate(&spec(8, PlantedModel::TwoCliques, NoiseModel::Empty)).unwrap();
        assert_eq!(inst.f.edge_count(), 12);
        assert_eq!(inst.crossing_noise(), 0);
        let cut = inst.f.cut(&inst.left).unwrap();
        assert_eq!(cut.cost(), 0);
        assert!(inst.f.vertices().all(|v| inst.f.degree(v).unwrap() == 3));
    }

    #[test]
    fn full_crossing_noise_is_k22() {
        let missing = generate(&spec(4, PlantedModel::File { path: "no/such/file".into() }, NoiseModel::Empty));
        assert!(matches!(missing, Err(Error::Io(_))));
        let inst = generate(&GeneratorSpec {
            n: 4,
            planted: PlantedModel::TwoRandomRegular { degree: 0 },
            noise: NoiseModel::BipartiteCrossing { q: 1.0 },
            seed: 1,
        })
        .unwrap();
        assert_eq!(inst.f.edge_count(), 4);
        assert_eq!(inst.crossing_noise(), 4);
        assert_eq!(inst.f.cut(&inst.left).unwrap().cost(), 4);
    }

    #[test]
    fn infeasible_regular_degree() {
        let res = generate(&spec(8, PlantedModel::TwoRandomRegular { degree: 4 }, NoiseModel::Empty));
        assert!(matches!(res, Err(Error::InfeasibleModel(_))));
    }

    #[test]
    fn bundle_round_trip() {
        let inst = generate(&spec(
            32,
            PlantedModel::TwoRandomRegular { degree: 3 },
            NoiseModel::ErdosRenyi { p: 0.2 },
        ))
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_bundle(&inst, dir.path()).unwrap();
        let back = read_bundle(dir.path()).unwrap();
        assert_eq!(back.f, inst.f);
        assert_eq!(back.left, inst.left);
        assert_eq!(back.noise_edges, inst.noise_edges);
        assert_eq!(back.overlap_edges, inst.overlap_edges);
        assert_eq!(back.pi, inst.pi);
        assert_eq!(back.spec, inst.spec);
    }

    #[test]
    fn spec_from_config() {
        let cfg = KvConfig::parse("n = 91\ng_model = two-random-regular\ng_degree = 4\nh_model = erdos-renyi\nh_avg_degree = 9\nseed = 4\n").unwrap();
        // odd n is rejected even though the rest parses
        assert!(GeneratorSpec::from_config(&cfg).is_err());
        let mut cfg = cfg;
        cfg.set("n", 92);
        cfg.set("h_avg_degree", 9.1);
        let s = GeneratorSpec::from_config(&cfg).unwrap();
        assert_eq!(s.planted, PlantedModel::TwoRandomRegular { degree: 4 });
        assert_eq!(s.noise, NoiseModel::ErdosRenyi { p: 9.1 / 91.0 });
        assert_eq!(s.seed, 4);
        let odd = KvConfig::parse("n = 7\ng_model = two-cliques\nh_model = empty\n").unwrap();
        assert!(GeneratorSpec::from_config(&odd).is_err());
    }
}
