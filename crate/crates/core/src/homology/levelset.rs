//! Zero-dimensional persistence of the sublevel and superlevel filtrations of
//! a series on the path graph of its indices.

use serde::{Deserialize, Serialize};

use super::{DiagramSource, PersistenceDiagram, PersistenceInterval, UnionFind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelSet {
    Lower,
    Upper,
}

// Collapse runs of equal adjacent values into one vertex.
fn collapse_plateaus(x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    for &v in x {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

// Sublevel persistence with the elder rule. The surviving component is
// closed at the global maximum so the diagram is never empty.
fn sublevel(values: &[f64]) -> Vec<(f64, f64)> {
    let v = collapse_plateaus(values);
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));

    let mut uf = UnionFind::new(n);
    // Birth vertex of the component rooted at each index.
    let mut birth = vec![usize::MAX; n];
    let mut active = vec![false; n];
    let mut pairs = Vec::new();

    let older = |a: usize, b: usize| v[a] < v[b] || (v[a] == v[b] && a < b);

    for &i in &order {
        active[i] = true;
        birth[i] = i;
        for j in [i.wrapping_sub(1), i + 1] {
            if j >= n || !active[j] {
                continue;
            }
            let (ri, rj) = (uf.find(i), uf.find(j));
            if ri == rj {
                continue;
            }
            let (bi, bj) = (birth[ri], birth[rj]);
            let (survivor, dying) = if older(bi, bj) { (bi, bj) } else { (bj, bi) };
            // Joining a fresh vertex to an existing component is not a death.
            if dying != i {
                pairs.push((v[dying], v[i]));
            }
            let root = uf.union(ri, rj).expect("distinct roots");
            birth[root] = survivor;
        }
    }

    let (min, max) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    pairs.push((min, max));
    pairs
}

/// H0 diagram of the lower or upper level-set filtration of `x`.
///
/// Upper level sets are computed on `-x` and mapped back, so every interval
/// is stored as `(min, max)` with its lifetime preserved.
pub fn level_set_persistence(x: &[f64], direction: LevelSet) -> Result<PersistenceDiagram> {
    if x.is_empty() {
        return Err(Error::EmptySeries);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("series has non-finite values"));
    }
    let (pairs, source) = match direction {
        LevelSet::Lower => (sublevel(x), DiagramSource::LowerLevelSet),
        LevelSet::Upper => {
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let pairs = sublevel(&neg).into_iter().map(|(b, d)| (-d, -b)).collect();
            (pairs, DiagramSource::UpperLevelSet)
        }
    };
    Ok(PersistenceDiagram {
        dim: 0,
        source,
        intervals: pairs
            .into_iter()
            .map(|(b, d)| PersistenceInterval::finite(b, d, 0))
            .collect(),
    })
}
