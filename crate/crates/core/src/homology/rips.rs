//! Vietoris–Rips persistence in dimensions 0 and 1.
//!
//! H0 comes from Kruskal's algorithm over the edges in filtration order. H1 is
//! read off a Z/2 reduction of the coboundary matrix of edges (columns,
//! processed by decreasing filtration order) against triangles (rows). Edges
//! that kill an H0 class have zero coboundary columns after reduction and are
//! cleared up front. Coboundaries are generated on demand from the distance
//! matrix; only the column operations (the `V` of `R = D V`) are stored.
//!
//! Simplices are ordered by diameter, then lexicographically by vertex
//! indices. The filtration is truncated at the enclosing radius, where the
//! complex becomes a cone and no class of dimension 0 or 1 survives.
//! Zero-persistence pairs are not reported.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::{DiagramSource, DistanceMatrix, PersistenceDiagram, PersistenceInterval, UnionFind};
use crate::error::{Error, Result};
use crate::signal::PointCloud;

/// H0 and H1 intervals of a Rips filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct RipsBarcode {
    pub h0: Vec<PersistenceInterval>,
    pub h1: Vec<PersistenceInterval>,
}

impl RipsBarcode {
    pub fn into_diagrams(self, source: DiagramSource) -> [PersistenceDiagram; 2] {
        [
            PersistenceDiagram { dim: 0, source, intervals: self.h0 },
            PersistenceDiagram { dim: 1, source, intervals: self.h1 },
        ]
    }
}

/// Rips persistence of a Euclidean point cloud.
pub fn rips_persistence(cloud: &PointCloud) -> Result<RipsBarcode> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    rips_persistence_from_distances(&DistanceMatrix::euclidean(cloud))
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    diam: f64,
    a: u32,
    b: u32,
}

const VERTEX_BITS: u32 = 21;
const VERTEX_MASK: u128 = (1 << VERTEX_BITS) - 1;

// Triangle key: diameter bits in the high word, then the sorted vertex
// triple. Nonnegative floats order like their bit patterns, so integer order
// on keys is (diameter, lexicographic vertices).
#[inline]
fn triangle_key(diam: f64, mut v: [u32; 3]) -> u128 {
    v.sort_unstable();
    ((diam.to_bits() as u128) << 64)
        | ((v[0] as u128) << (2 * VERTEX_BITS))
        | ((v[1] as u128) << VERTEX_BITS)
        | v[2] as u128
}

#[inline]
fn key_diameter(key: u128) -> f64 {
    f64::from_bits((key >> 64) as u64)
}

#[cfg(test)]
fn key_vertices(key: u128) -> [u32; 3] {
    [
        ((key >> (2 * VERTEX_BITS)) & VERTEX_MASK) as u32,
        ((key >> VERTEX_BITS) & VERTEX_MASK) as u32,
        (key & VERTEX_MASK) as u32,
    ]
}

struct Coboundary<'a> {
    dm: &'a DistanceMatrix,
    threshold: f64,
}

impl Coboundary<'_> {
    fn fill(&self, e: Edge, out: &mut Vec<u128>) {
        let (a, b) = (e.a as usize, e.b as usize);
        let (ra, rb) = (self.dm.row(a), self.dm.row(b));
        for k in 0..self.dm.len() {
            if k == a || k == b {
                continue;
            }
            let (da, db) = (ra[k], rb[k]);
            if da <= self.threshold && db <= self.threshold {
                let diam = e.diam.max(da).max(db);
                out.push(triangle_key(diam, [e.a, e.b, k as u32]));
            }
        }
    }
}

// Lowest entry with odd multiplicity; it stays in the heap.
fn pivot(heap: &mut BinaryHeap<Reverse<u128>>) -> Option<u128> {
    while let Some(Reverse(top)) = heap.pop() {
        match heap.peek() {
            Some(&Reverse(next)) if next == top => {
                heap.pop();
            }
            _ => {
                heap.push(Reverse(top));
                return Some(top);
            }
        }
    }
    None
}

/// Rips persistence from a precomputed distance matrix.
pub fn rips_persistence_from_distances(dm: &DistanceMatrix) -> Result<RipsBarcode> {
    let n = dm.len();
    if n == 0 {
        return Err(Error::EmptyCloud);
    }
    if n as u128 > VERTEX_MASK {
        return Err(Error::invalid(format!("{n} points exceed the supported cloud size")));
    }
    let mut h0 = Vec::with_capacity(n);
    let mut h1 = Vec::new();
    if n == 1 {
        h0.push(PersistenceInterval::essential(0.0, 0));
        return Ok(RipsBarcode { h0, h1 });
    }

    let threshold = dm.enclosing_radius();
    let mut edges: Vec<Edge> = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            let diam = dm.get(a, b);
            if diam <= threshold {
                edges.push(Edge { diam, a: a as u32, b: b as u32 });
            }
        }
    }
    edges.sort_by(|x, y| x.diam.total_cmp(&y.diam).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));

    let mut kills_component = vec![false; edges.len()];
    let mut uf = UnionFind::new(n);
    for (idx, e) in edges.iter().enumerate() {
        if uf.union(e.a as usize, e.b as usize).is_some() {
            kills_component[idx] = true;
            if e.diam > 0.0 {
                h0.push(PersistenceInterval::finite(0.0, e.diam, 0));
            }
        }
    }
    h0.push(PersistenceInterval::essential(0.0, 0));

    let cob = Coboundary { dm, threshold };
    let mut pivot_owner: HashMap<u128, usize> = HashMap::new();
    let mut ops: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut buf = Vec::with_capacity(n);

    for idx in (0..edges.len()).rev() {
        if kills_component[idx] {
            continue;
        }
        let e = edges[idx];
        buf.clear();
        cob.fill(e, &mut buf);
        let Some(&low) = buf.iter().min() else {
            h1.push(PersistenceInterval::essential(e.diam, 1));
            continue;
        };
        let death = if !pivot_owner.contains_key(&low) {
            pivot_owner.insert(low, idx);
            Some(low)
        } else {
            let mut heap: BinaryHeap<Reverse<u128>> = buf.drain(..).map(Reverse).collect();
            let mut added: Vec<usize> = Vec::new();
            let found = loop {
                let Some(p) = pivot(&mut heap) else { break None };
                match pivot_owner.get(&p) {
                    Some(&owner) => {
                        let mut add = |j: usize| {
                            added.push(j);
                            let mut tmp = Vec::with_capacity(n);
                            cob.fill(edges[j], &mut tmp);
                            heap.extend(tmp.into_iter().map(Reverse));
                        };
                        add(owner);
                        if let Some(v) = ops.get(&owner) {
                            for &j in v {
                                add(j);
                            }
                        }
                    }
                    None => break Some(p),
                }
            };
            if let Some(p) = found {
                pivot_owner.insert(p, idx);
                added.sort_unstable();
                let mut v = Vec::with_capacity(added.len());
                let mut i = 0;
                while i < added.len() {
                    let mut j = i;
                    while j < added.len() && added[j] == added[i] {
                        j += 1;
                    }
                    if (j - i) % 2 == 1 {
                        v.push(added[i]);
                    }
                    i = j;
                }
                if !v.is_empty() {
                    ops.insert(idx, v);
                }
            }
            found
        };
        match death {
            Some(key) => {
                let d = key_diameter(key);
                if d > e.diam {
                    h1.push(PersistenceInterval::finite(e.diam, d, 1));
                }
            }
            None => h1.push(PersistenceInterval::essential(e.diam, 1)),
        }
    }

    Ok(RipsBarcode { h0, h1 })
}
