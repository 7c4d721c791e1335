use serde::{Deserialize, Serialize};

use super::packing::pack_level;
use super::schedule::{check_k, LevelSchedule, Smallness};
use crate::error::{Error, Result};
use crate::geom::Point;

/// Largest generation the tree will enumerate node by node.
pub const MAX_ENUMERATED_NODES: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The small set `E`, radii `s = Π σ_k^K R_k`.
    Source,
    /// The image `φ(E)`, radii `t = Π σ_k R_k`.
    Target,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Source => "source",
            Side::Target => "target",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "source" => Ok(Side::Source),
            "target" => Ok(Side::Target),
            other => Err(Error::Argument(format!(
                "side must be `source` or `target`, got `{other}`"
            ))),
        }
    }
}

/// Shared data of every node in one generation (schedules are level-uniform).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Generation {
    pub log_s: f64,
    pub log_t: f64,
    pub log_mass: f64,
    pub log_count: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Realization {
    seed: u64,
    /// Unit-disk packing of level `N` at index `N - 1`.
    unit_centers: Vec<Vec<Point>>,
}

/// A node of the two-sided disk hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeNode {
    pub generation: usize,
    pub path: Vec<u32>,
    pub log_s: f64,
    pub log_t: f64,
    pub log_mass: f64,
    pub log_source_protect: f64,
    pub log_target_protect: f64,
    pub source_center: Option<Point>,
    pub target_center: Option<Point>,
}

impl TreeNode {
    pub fn s(&self) -> f64 {
        self.log_s.exp()
    }

    pub fn t(&self) -> f64 {
        self.log_t.exp()
    }

    pub fn mass(&self) -> f64 {
        self.log_mass.exp()
    }

    pub fn log_radius(&self, side: Side) -> f64 {
        match side {
            Side::Source => self.log_s,
            Side::Target => self.log_t,
        }
    }

    pub fn radius(&self, side: Side) -> f64 {
        self.log_radius(side).exp()
    }

    pub fn protect_radius(&self, side: Side) -> f64 {
        match side {
            Side::Source => self.log_source_protect.exp(),
            Side::Target => self.log_target_protect.exp(),
        }
    }

    pub fn center(&self, side: Side) -> Option<Point> {
        match side {
            Side::Source => self.source_center,
            Side::Target => self.target_center,
        }
    }
}

/// The Cantor construction truncated at `depth`: a source tree of disks with
/// generating radii `s` and a target tree with radii `t`, joined by the
/// quasiconformal correspondence node for node.
#[derive(Debug, Clone, PartialEq)]
pub struct CantorTree {
    k: f64,
    levels: Vec<LevelSchedule>,
    smallness: Smallness,
    generations: Vec<Generation>,
    log_scale: f64,
    realization: Option<Realization>,
}

impl CantorTree {
    /// Builds the first `depth` levels of `levels`. Radii and masses follow the
    /// product formulas; the mass of a generation-`N` node is
    /// `(R_1⋯R_N)² · Π_{N<n≤depth} (1 − eps_n)`.
    pub fn build(
        k: f64,
        levels: &[LevelSchedule],
        depth: usize,
        smallness: Smallness,
    ) -> Result<Self> {
        check_k(k)?;
        if depth > levels.len() {
            return Err(Error::Depth {
                requested: depth,
                available: levels.len(),
            });
        }
        let levels = levels[..depth].to_vec();
        for (i, level) in levels.iter().enumerate() {
            level.validate(i + 1, smallness)?;
            if smallness == Smallness::Geometric {
                pack_level(level.branching, level.log_radius(), 0).map_err(|e| {
                    Error::Schedule {
                        level: i + 1,
                        reason: e.to_string(),
                    }
                })?;
            }
        }

        let tail: Vec<f64> = {
            // tail[n] = Σ_{n < m ≤ depth} ln(1 − eps_m)
            let mut t = vec![0.0; depth + 1];
            for n in (0..depth).rev() {
                t[n] = t[n + 1] + levels[n].log_one_minus_eps();
            }
            t
        };
        let mut generations = Vec::with_capacity(depth + 1);
        let (mut log_s, mut log_t, mut log_r2, mut log_count) = (0.0, 0.0, 0.0, 0.0);
        generations.push(Generation {
            log_s,
            log_t,
            log_mass: tail[0],
            log_count,
        });
        for (i, level) in levels.iter().enumerate() {
            log_s += k * level.log_sigma() + level.log_radius();
            log_t += level.log_sigma() + level.log_radius();
            log_r2 += 2.0 * level.log_radius();
            log_count += (level.branching as f64).ln();
            generations.push(Generation {
                log_s,
                log_t,
                log_mass: log_r2 + tail[i + 1],
                log_count,
            });
        }
        Ok(Self {
            k,
            levels,
            smallness,
            generations,
            log_scale: 0.0,
            realization: None,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[LevelSchedule] {
        &self.levels
    }

    pub fn smallness(&self) -> Smallness {
        self.smallness
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Generation data with radii in units of the ambient scale.
    pub fn generation(&self, n: usize) -> Generation {
        let g = self.generations[n];
        Generation {
            log_s: g.log_s + self.log_scale,
            log_t: g.log_t + self.log_scale,
            ..g
        }
    }

    pub fn log_gen_radius(&self, side: Side, n: usize) -> f64 {
        let g = self.generation(n);
        match side {
            Side::Source => g.log_s,
            Side::Target => g.log_t,
        }
    }

    /// Radius of a generation-`n` protecting disk: the parent's generating
    /// radius times `R_n`. The root's protecting disk is its generating disk.
    pub fn log_protect_radius(&self, side: Side, n: usize) -> f64 {
        if n == 0 {
            return self.log_gen_radius(side, 0);
        }
        self.log_gen_radius(side, n - 1) + self.levels[n - 1].log_radius()
    }

    /// `Π_{n ≤ depth} (1 − eps_n)`, the mass of every generation.
    pub fn log_total_mass(&self) -> f64 {
        self.generations[0].log_mass
    }

    pub fn total_mass(&self) -> f64 {
        self.log_total_mass().exp()
    }

    /// `ln (R_1⋯R_n)²`: the generation-`n` node mass of the mass-conserving
    /// construction (`M_m R_m² = 1` at every level), in which each generation
    /// carries unit mass.
    pub fn log_area_mass(&self, n: usize) -> f64 {
        self.levels[..n].iter().map(|l| 2.0 * l.log_radius()).sum()
    }

    pub fn node_count(&self, n: usize) -> f64 {
        self.generations[n].log_count.exp()
    }

    /// Same tree with every radius (and realized center) multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            log_scale: self.log_scale + lambda.ln(),
            ..self.clone()
        }
    }

    /// Fixes the planar picture: each level gets a seeded packing of its
    /// `M_N` protecting disks, reused for every parent of that level.
    pub fn realize_centers(&self, seed: u64) -> Result<Self> {
        let unit_centers = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                pack_level(l.branching, l.log_radius(), seed.wrapping_add(i as u64)).map_err(|e| {
                    Error::Schedule {
                        level: i + 1,
                        reason: e.to_string(),
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            realization: Some(Realization { seed, unit_centers }),
            ..self.clone()
        })
    }

    pub fn is_realized(&self) -> bool {
        self.realization.is_some()
    }

    pub fn seed(&self) -> Option<u64> {
        self.realization.as_ref().map(|r| r.seed)
    }

    /// Center of the node at `path` on `side`, if realized.
    pub fn center(&self, side: Side, path: &[u32]) -> Option<Point> {
        let real = self.realization.as_ref()?;
        let mut c = Point::ORIGIN;
        for (i, &j) in path.iter().enumerate() {
            let parent_radius = self.log_gen_radius(side, i).exp();
            c = c + real.unit_centers[i][j as usize] * parent_radius;
        }
        Some(c)
    }

    pub fn node(&self, path: &[u32]) -> Result<TreeNode> {
        let n = path.len();
        if n > self.depth() {
            return Err(Error::Depth {
                requested: n,
                available: self.depth(),
            });
        }
        for (i, &j) in path.iter().enumerate() {
            if j as usize >= self.levels[i].branching {
                return Err(Error::Argument(format!(
                    "child index {j} out of range at level {}",
                    i + 1
                )));
            }
        }
        let g = self.generation(n);
        Ok(TreeNode {
            generation: n,
            path: path.to_vec(),
            log_s: g.log_s,
            log_t: g.log_t,
            log_mass: g.log_mass,
            log_source_protect: self.log_protect_radius(Side::Source, n),
            log_target_protect: self.log_protect_radius(Side::Target, n),
            source_center: self.center(Side::Source, path),
            target_center: self.center(Side::Target, path),
        })
    }

    /// All paths of generation `n` in lexicographic order.
    pub fn paths_at(&self, n: usize) -> Result<Vec<Vec<u32>>> {
        if n > self.depth() {
            return Err(Error::Depth {
                requested: n,
                available: self.depth(),
            });
        }
        let count = self.node_count(n);
        if count > MAX_ENUMERATED_NODES as f64 {
            return Err(Error::TreeTooLarge {
                generation: n,
                nodes: count,
                limit: MAX_ENUMERATED_NODES,
            });
        }
        let mut paths: Vec<Vec<u32>> = vec![Vec::new()];
        for level in &self.levels[..n] {
            paths = paths
                .into_iter()
                .flat_map(|p| {
                    (0..level.branching as u32).map(move |j| {
                        let mut q = p.clone();
                        q.push(j);
                        q
                    })
                })
                .collect();
        }
        Ok(paths)
    }

    pub fn nodes_at(&self, n: usize) -> Result<Vec<TreeNode>> {
        self.paths_at(n)?.iter().map(|p| self.node(p)).collect()
    }

    pub fn leaves(&self) -> Result<Vec<TreeNode>> {
        self.nodes_at(self.depth())
    }

    pub fn export(&self) -> Result<TreeExport> {
        let mut nodes = Vec::new();
        for n in 0..=self.depth() {
            for node in self.nodes_at(n)? {
                nodes.push(ExportedNode {
                    path: node.path,
                    s_log: node.log_s,
                    t_log: node.log_t,
                    mass_log: node.log_mass,
                });
            }
        }
        Ok(TreeExport {
            k: self.k,
            depth: self.depth(),
            seed: self.seed(),
            nodes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportedNode {
    pub path: Vec<u32>,
    pub s_log: f64,
    pub t_log: f64,
    pub mass_log: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeExport {
    #[serde(rename = "K")]
    pub k: f64,
    pub depth: usize,
    pub seed: Option<u64>,
    pub nodes: Vec<ExportedNode>,
}

/// Builds the tree; thin wrapper over [`CantorTree::build`].
pub fn build_tree(
    k: f64,
    levels: &[LevelSchedule],
    depth: usize,
    smallness: Smallness,
) -> Result<CantorTree> {
    CantorTree::build(k, levels, depth, smallness)
}
