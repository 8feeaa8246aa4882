//! Structured seed chromosomes: strong hoppings on a disjoint cover of the
//! lattice by small blocks, weak hoppings everywhere else.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{Chromosome, Hoppings};
use crate::lattice::Lattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotifKind {
    /// Perfect matching: every site in exactly one strong bond.
    DimerTiling,
    /// Disjoint 4-cycles.
    PlaquetteTiling,
    /// Disjoint triangles.
    TriangleTiling,
    /// Disjoint pairs of triangles sharing an edge (4 sites, 5 bonds).
    DiamondTiling,
}

impl MotifKind {
    pub const ALL: [MotifKind; 4] = [
        MotifKind::DimerTiling,
        MotifKind::PlaquetteTiling,
        MotifKind::TriangleTiling,
        MotifKind::DiamondTiling,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MotifKind::DimerTiling => "dimer_tiling",
            MotifKind::PlaquetteTiling => "plaquette_tiling",
            MotifKind::TriangleTiling => "triangle_tiling",
            MotifKind::DiamondTiling => "diamond_tiling",
        }
    }

    pub fn block_sites(self) -> usize {
        match self {
            MotifKind::DimerTiling => 2,
            MotifKind::TriangleTiling => 3,
            MotifKind::PlaquetteTiling | MotifKind::DiamondTiling => 4,
        }
    }
}

impl fmt::Display for MotifKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MotifKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        MotifKind::ALL
            .into_iter()
            .find(|k| k.as_str() == key || k.as_str().trim_end_matches("_tiling") == key)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown motif kind {s:?}")))
    }
}

/// A candidate cover element: sorted site list and the lattice edge indices
/// that become strong.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Block {
    pub sites: Vec<usize>,
    pub edges: Vec<usize>,
}

fn edge_id(lattice: &Lattice) -> impl Fn(usize, usize) -> Option<usize> + '_ {
    let index = lattice.edge_index();
    move |a, b| index.get(&(a.min(b), a.max(b))).copied()
}

fn triangle_blocks(lattice: &Lattice) -> Vec<Block> {
    let id = edge_id(lattice);
    lattice
        .triangles()
        .into_iter()
        .map(|[a, b, c]| Block {
            sites: vec![a, b, c],
            edges: sorted(vec![
                id(a, b).unwrap(),
                id(a, c).unwrap(),
                id(b, c).unwrap(),
            ]),
        })
        .collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

pub fn candidate_blocks(lattice: &Lattice, kind: MotifKind) -> Vec<Block> {
    let id = edge_id(lattice);
    let neighbors = lattice.neighbors();
    let mut blocks: BTreeSet<Block> = BTreeSet::new();
    match kind {
        MotifKind::DimerTiling => {
            for (k, &(a, b)) in lattice.edges().iter().enumerate() {
                blocks.insert(Block {
                    sites: sorted(vec![a, b]),
                    edges: vec![k],
                });
            }
        }
        MotifKind::TriangleTiling => blocks.extend(triangle_blocks(lattice)),
        MotifKind::PlaquetteTiling => {
            // cycle a-b-c-d-a with b < d and c != a
            for (a, nb) in neighbors.iter().enumerate() {
                for (x, &b) in nb.iter().enumerate() {
                    for &d in &nb[x + 1..] {
                        for &c in &neighbors[b] {
                            if c == a || c == d || !neighbors[d].contains(&c) {
                                continue;
                            }
                            blocks.insert(Block {
                                sites: sorted(vec![a, b, c, d]),
                                edges: sorted(vec![
                                    id(a, b).unwrap(),
                                    id(b, c).unwrap(),
                                    id(c, d).unwrap(),
                                    id(d, a).unwrap(),
                                ]),
                            });
                        }
                    }
                }
            }
        }
        MotifKind::DiamondTiling => {
            let triangles = triangle_blocks(lattice);
            for (x, s) in triangles.iter().enumerate() {
                for t in &triangles[x + 1..] {
                    let shared = s.sites.iter().filter(|v| t.sites.contains(v)).count();
                    if shared != 2 {
                        continue;
                    }
                    let sites: BTreeSet<usize> = s.sites.iter().chain(&t.sites).copied().collect();
                    let edges: BTreeSet<usize> = s.edges.iter().chain(&t.edges).copied().collect();
                    blocks.insert(Block {
                        sites: sites.into_iter().collect(),
                        edges: edges.into_iter().collect(),
                    });
                }
            }
        }
    }
    blocks.into_iter().collect()
}

const SEARCH_BUDGET: u64 = 50_000_000;

/// Exact cover of all sites by disjoint blocks. Depth-first: take the
/// lowest uncovered site and try its candidate blocks in sorted order.
pub fn find_cover(lattice: &Lattice, kind: MotifKind) -> Result<Vec<Block>> {
    let infeasible = || Error::MotifInfeasible {
        kind: kind.to_string(),
        lattice: lattice.name().to_string(),
    };
    let n = lattice.n_sites();
    if !n.is_multiple_of(kind.block_sites()) {
        return Err(infeasible());
    }
    let blocks = candidate_blocks(lattice, kind);
    let mut by_site: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, b) in blocks.iter().enumerate() {
        by_site[b.sites[0]].push(k);
    }

    struct Search<'a> {
        blocks: &'a [Block],
        by_site: &'a [Vec<usize>],
        covered: Vec<bool>,
        chosen: Vec<usize>,
        nodes: u64,
    }

    impl Search<'_> {
        fn solve(&mut self, from: usize) -> Option<bool> {
            let Some(site) = (from..self.covered.len()).find(|&s| !self.covered[s]) else {
                return Some(true);
            };
            // the lowest uncovered site is the smallest site of any block covering it
            for &k in &self.by_site[site] {
                self.nodes += 1;
                if self.nodes > SEARCH_BUDGET {
                    return None;
                }
                let block = &self.blocks[k];
                if block.sites.iter().any(|&s| self.covered[s]) {
                    continue;
                }
                for &s in &block.sites {
                    self.covered[s] = true;
                }
                self.chosen.push(k);
                match self.solve(site + 1) {
                    Some(false) => {}
                    done => return done,
                }
                self.chosen.pop();
                for &s in &block.sites {
                    self.covered[s] = false;
                }
            }
            Some(false)
        }
    }

    let mut search = Search {
        blocks: &blocks,
        by_site: &by_site,
        covered: vec![false; n],
        chosen: Vec::new(),
        nodes: 0,
    };
    match search.solve(0) {
        Some(true) => Ok(search.chosen.iter().map(|&k| blocks[k].clone()).collect()),
        Some(false) => Err(infeasible()),
        None => {
            log::warn!(
                "{kind} cover search on {} exhausted its budget",
                lattice.name()
            );
            Err(infeasible())
        }
    }
}

pub fn cover_chromosome(
    lattice: &Lattice,
    cover: &[Block],
    strong_t: f64,
    weak_t: f64,
) -> Result<Chromosome> {
    let mut genes = vec![weak_t; lattice.n_edges()];
    for k in cover.iter().flat_map(|b| &b.edges) {
        genes[*k] = strong_t;
    }
    Hoppings::new(genes)
}

/// Chromosome with `strong_t` on the bonds of a deterministic disjoint cover
/// of `kind`, `weak_t` elsewhere.
pub fn seed_motif(
    lattice: &Lattice,
    kind: MotifKind,
    strong_t: f64,
    weak_t: f64,
) -> Result<Chromosome> {
    let cover = find_cover(lattice, kind)?;
    cover_chromosome(lattice, &cover, strong_t, weak_t)
}
