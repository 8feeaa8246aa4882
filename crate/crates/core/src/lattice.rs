//! Lattice graphs: a site count plus an undirected nearest-neighbor edge list.
//!
//! The edge order is significant: hopping vectors and GA chromosomes carry one
//! value per edge, indexed by position in [`Lattice::edges`]. Coordinates and
//! the periodic cell are decorative and only used for rendering.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    name: String,
    n_sites: usize,
    edges: Vec<(usize, usize)>,
    coords: Option<Vec<Point>>,
    cell: Option<[Point; 2]>,
}

impl Lattice {
    /// Validates and builds a lattice. Edges are stored as `(min, max)` in the
    /// given order.
    pub fn new(
        name: impl Into<String>,
        n_sites: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        coords: Option<Vec<Point>>,
    ) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidSize("lattice needs at least one site".into()));
        }
        let mut seen = HashSet::new();
        let mut stored = Vec::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            for index in [i, j] {
                if index >= n_sites {
                    return Err(Error::SiteOutOfRange { index, n_sites });
                }
            }
            let e = (i.min(j), i.max(j));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            stored.push(e);
        }
        if let Some(c) = &coords {
            if c.len() != n_sites {
                return Err(Error::CoordCount {
                    got: c.len(),
                    n_sites,
                });
            }
        }
        Ok(Lattice {
            name: name.into(),
            n_sites,
            edges: stored,
            coords,
            cell: None,
        })
    }

    /// Attaches the two periodic supercell vectors (in coordinate units).
    pub fn with_cell(mut self, cell: [Point; 2]) -> Self {
        self.cell = Some(cell);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    pub fn cell(&self) -> Option<[Point; 2]> {
        self.cell
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_sites];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// The common degree if every site has the same one.
    pub fn coordination(&self) -> Option<usize> {
        let deg = self.degrees();
        let z = deg[0];
        deg.iter().all(|&d| d == z).then_some(z)
    }

    /// Sorted adjacency lists.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_sites];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Map from normalized `(min, max)` pair to edge index.
    pub fn edge_index(&self) -> HashMap<(usize, usize), usize> {
        self.edges
            .iter()
            .enumerate()
            .map(|(k, &e)| (e, k))
            .collect()
    }

    /// Two-coloring by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.neighbors();
        let mut color = vec![None::<bool>; self.n_sites];
        for start in 0..self.n_sites {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &v in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// All 3-cycles as sorted site triples, in lexicographic order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let adj = self.neighbors();
        let mut out = Vec::new();
        for i in 0..self.n_sites {
            for &j in adj[i].iter().filter(|&&j| j > i) {
                for &k in adj[j].iter().filter(|&&k| k > j) {
                    if adj[i].binary_search(&k).is_ok() {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// Copy with edges sorted, the canonical form used for comparisons.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        c.edges.sort_unstable();
        c
    }

    pub fn to_document(&self) -> LatticeDocument {
        LatticeDocument {
            name: self.name.clone(),
            n_sites: self.n_sites,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
            coords: self.coords.clone(),
            cell: self.cell,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("lattice serializes")
    }
}

/// On-disk lattice document (JSON).
///
/// ```json
/// { "name": "ring-3", "n_sites": 3, "edges": [[0, 1], [1, 2], [0, 2]],
///   "coords": [[0.0, 1.0], ...], "cell": [[6.0, 0.0], [0.0, 6.0]] }
/// ```
///
/// `coords` and `cell` are optional; unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub name: String,
    pub n_sites: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<[Point; 2]>,
}

impl TryFrom<LatticeDocument> for Lattice {
    type Error = Error;

    fn try_from(doc: LatticeDocument) -> Result<Self> {
        let lattice = Lattice::new(
            doc.name,
            doc.n_sites,
            doc.edges.into_iter().map(|[i, j]| (i, j)),
            doc.coords,
        )?;
        Ok(match doc.cell {
            Some(cell) => lattice.with_cell(cell),
            None => lattice,
        })
    }
}

pub fn load_lattice(text: &str) -> Result<Lattice> {
    let doc: LatticeDocument = serde_json::from_str(text).map_err(|source| Error::Parse {
        what: "lattice document",
        source,
    })?;
    Lattice::try_from(doc)
}

pub fn build_ring(n: usize) -> Result<Lattice> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("ring needs n >= 3, got {n}")));
    }
    let radius = n as f64 / (2.0 * PI);
    let coords = (0..n)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / n as f64;
            [radius * phi.cos(), radius * phi.sin()]
        })
        .collect();
    Lattice::new(
        format!("ring-{n}"),
        n,
        (0..n).map(|i| (i, (i + 1) % n)),
        Some(coords),
    )
}

/// Square lattice, site `x + lx * y`. With periodic wrapping a side of length 2
/// would produce each wrap bond twice; those are collapsed to one edge.
pub fn build_square(lx: usize, ly: usize, periodic: bool) -> Result<Lattice> {
    if lx < 2 || ly < 2 {
        return Err(Error::InvalidSize(format!(
            "square lattice needs both sides >= 2, got {lx}x{ly}"
        )));
    }
    let site = |x: usize, y: usize| x + lx * y;
    let mut edges = Vec::with_capacity(2 * lx * ly);
    let mut seen = HashSet::new();
    let mut push = |a: usize, b: usize| {
        if seen.insert((a.min(b), a.max(b))) {
            edges.push((a, b));
        }
    };
    for y in 0..ly {
        for x in 0..lx {
            if periodic || x + 1 < lx {
                push(site(x, y), site((x + 1) % lx, y));
            }
            if periodic || y + 1 < ly {
                push(site(x, y), site(x, (y + 1) % ly));
            }
        }
    }
    let coords = (0..ly)
        .flat_map(|y| (0..lx).map(move |x| [x as f64, y as f64]))
        .collect();
    let kind = if periodic { "square" } else { "square-open" };
    let lattice = Lattice::new(format!("{kind}-{lx}x{ly}"), lx * ly, edges, Some(coords))?;
    Ok(if periodic {
        lattice.with_cell([[lx as f64, 0.0], [0.0, ly as f64]])
    } else {
        lattice
    })
}

const A1: Point = [1.0, 0.0];
const A2: Point = [0.5, 0.866_025_403_784_438_6];

fn tri_point(x: f64, y: f64) -> Point {
    [x * A1[0] + y * A2[0], x * A1[1] + y * A2[1]]
}

/// Kagomé lattice on a `cells_x` x `cells_y` torus of the triangular Bravais
/// lattice, three sites per cell (site `3 * cell + sublattice`).
pub fn build_kagome(cells_x: usize, cells_y: usize) -> Result<Lattice> {
    if cells_x < 2 || cells_y < 2 {
        return Err(Error::InvalidSize(format!(
            "kagome needs at least 2x2 cells, got {cells_x}x{cells_y}"
        )));
    }
    let (cx, cy) = (cells_x as isize, cells_y as isize);
    let site =
        |x: isize, y: isize, s: usize| 3 * (x.rem_euclid(cx) + cx * y.rem_euclid(cy)) as usize + s;
    let mut edges = Vec::with_capacity(6 * cells_x * cells_y);
    let mut coords = Vec::with_capacity(3 * cells_x * cells_y);
    for y in 0..cy {
        for x in 0..cx {
            let (a, b, c) = (site(x, y, 0), site(x, y, 1), site(x, y, 2));
            // up triangle
            edges.extend([(a, b), (a, c), (b, c)]);
            // down triangle around the A site of cell (x + 1, y)
            edges.extend([
                (b, site(x + 1, y, 0)),
                (c, site(x, y + 1, 0)),
                (b, site(x + 1, y - 1, 2)),
            ]);
            let (xf, yf) = (x as f64, y as f64);
            coords.extend([
                tri_point(xf, yf),
                tri_point(xf + 0.5, yf),
                tri_point(xf, yf + 0.5),
            ]);
        }
    }
    let n = 3 * cells_x * cells_y;
    Ok(
        Lattice::new(format!("kagome-{n}"), n, edges, Some(coords))?.with_cell([
            tri_point(cells_x as f64, 0.0),
            tri_point(0.0, cells_y as f64),
        ]),
    )
}

/// Offsets (triangular-lattice coordinates) of the six maple-leaf sites in a
/// cell, the hexagon around the cell's vacancy.
const BETTS_BASIS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

/// Superlattice vectors of the vacancies, in triangular-lattice coordinates.
const BETTS_SUPER: [(i32, i32); 2] = [(1, 2), (-2, 3)];

/// Maple-leaf bonds per cell: `(site, neighbor site, neighbor cell offset
/// along BETTS_SUPER[0], offset along BETTS_SUPER[1])`. The first six lines
/// close the hexagon inside the cell; the rest connect to adjacent cells.
/// Every site ends up with five neighbors.
pub(crate) const BETTS_BONDS: [(usize, usize, i32, i32); 15] = [
    (0, 1, 0, 0),
    (2, 1, 0, 0),
    (3, 2, 0, 0),
    (4, 3, 0, 0),
    (4, 5, 0, 0),
    (5, 0, 0, 0),
    (0, 2, 1, -1),
    (0, 4, 1, 0),
    (1, 4, 1, 0),
    (1, 3, 1, 0),
    (1, 5, 0, 1),
    (2, 5, 0, 1),
    (2, 4, 0, 1),
    (3, 0, -1, 1),
    (5, 3, 1, -1),
];

/// Maple-leaf (Betts) lattice: the triangular lattice with one site in seven
/// removed, on a `cells_x` x `cells_y` torus of 6-site cells.
pub fn build_betts(cells_x: usize, cells_y: usize) -> Result<Lattice> {
    if cells_x < 2 || cells_y < 2 {
        return Err(Error::InvalidSize(format!(
            "betts needs at least 2x2 cells, got {cells_x}x{cells_y}"
        )));
    }
    let (cx, cy) = (cells_x as i32, cells_y as i32);
    let site =
        |x: i32, y: i32, s: usize| 6 * (x.rem_euclid(cx) + cx * y.rem_euclid(cy)) as usize + s;
    let mut edges = Vec::with_capacity(15 * cells_x * cells_y);
    let mut coords = Vec::with_capacity(6 * cells_x * cells_y);
    for y in 0..cy {
        for x in 0..cx {
            for &(s, t, dx, dy) in &BETTS_BONDS {
                edges.push((site(x, y, s), site(x + dx, y + dy, t)));
            }
            let ox = x * BETTS_SUPER[0].0 + y * BETTS_SUPER[1].0;
            let oy = x * BETTS_SUPER[0].1 + y * BETTS_SUPER[1].1;
            coords.extend(
                BETTS_BASIS
                    .iter()
                    .map(|&(bx, by)| tri_point(f64::from(ox + bx), f64::from(oy + by))),
            );
        }
    }
    let n = 6 * cells_x * cells_y;
    let l1 = tri_point(
        f64::from(cx * BETTS_SUPER[0].0),
        f64::from(cx * BETTS_SUPER[0].1),
    );
    let l2 = tri_point(
        f64::from(cy * BETTS_SUPER[1].0),
        f64::from(cy * BETTS_SUPER[1].1),
    );
    Ok(Lattice::new(format!("betts-{n}"), n, edges, Some(coords))?.with_cell([l1, l2]))
}

/// Triangular lattice on an `lx` x `ly` rhombic torus, site `x + lx * y`.
pub fn build_triangular(lx: usize, ly: usize) -> Result<Lattice> {
    if lx < 3 || ly < 3 {
        return Err(Error::InvalidSize(format!(
            "triangular lattice needs both sides >= 3, got {lx}x{ly}"
        )));
    }
    let (ilx, ily) = (lx as isize, ly as isize);
    let site = |x: isize, y: isize| (x.rem_euclid(ilx) + ilx * y.rem_euclid(ily)) as usize;
    let mut edges = Vec::with_capacity(3 * lx * ly);
    for y in 0..ily {
        for x in 0..ilx {
            let s = site(x, y);
            edges.extend([
                (s, site(x + 1, y)),
                (s, site(x, y + 1)),
                (s, site(x - 1, y + 1)),
            ]);
        }
    }
    let coords = (0..ly)
        .flat_map(|y| (0..lx).map(move |x| tri_point(x as f64, y as f64)))
        .collect();
    let n = lx * ly;
    Ok(
        Lattice::new(format!("triangular-{lx}x{ly}"), n, edges, Some(coords))?
            .with_cell([tri_point(lx as f64, 0.0), tri_point(0.0, ly as f64)]),
    )
}
