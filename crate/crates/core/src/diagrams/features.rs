use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

use crate::homology::PersistenceDiagram;

pub const FEATURE_NAMES: [&str; 7] = [
    "w1",
    "w_inf",
    "entropy",
    "betti_l1",
    "betti_l2",
    "landscape_l1",
    "landscape_l2",
];

/// Seven diagram features. `w1` and `w_inf` are the 1-Wasserstein and
/// bottleneck distances to the empty diagram.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagramFeatures {
    pub w1: f64,
    pub w_inf: f64,
    pub entropy: f64,
    pub betti_l1: f64,
    pub betti_l2: f64,
    pub landscape_l1: f64,
    pub landscape_l2: f64,
}

impl DiagramFeatures {
    pub fn to_array(&self) -> [f64; 7] {
        [
            self.w1,
            self.w_inf,
            self.entropy,
            self.betti_l1,
            self.betti_l2,
            self.landscape_l1,
            self.landscape_l2,
        ]
    }
}

/// Features of the finite part of `d`; essential intervals are ignored.
pub fn get_features(d: &PersistenceDiagram) -> DiagramFeatures {
    let bars: Vec<(f64, f64)> = d.finite().map(|i| (i.birth, i.death)).collect();
    features_of(&bars)
}

fn features_of(bars: &[(f64, f64)]) -> DiagramFeatures {
    let total: f64 = bars.iter().map(|(b, d)| d - b).sum();
    if total <= 0.0 {
        return DiagramFeatures::default();
    }
    let longest = bars.iter().map(|(b, d)| d - b).fold(0.0, f64::max);
    let entropy = bars
        .iter()
        .map(|(b, d)| (d - b) / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum::<f64>()
        .max(0.0);
    let (betti_l1, betti_l2) = betti_norms(bars);
    let (landscape_l1, landscape_l2) = landscape_norms(bars);
    DiagramFeatures {
        w1: total / SQRT_2,
        w_inf: longest / SQRT_2,
        entropy,
        betti_l1,
        betti_l2,
        landscape_l1,
        landscape_l2,
    }
}

/// L1 and L2 norms of the Betti curve, integrated exactly between
/// consecutive endpoints where the curve is constant.
pub fn betti_norms(bars: &[(f64, f64)]) -> (f64, f64) {
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * bars.len());
    for &(b, d) in bars {
        if d > b {
            events.push((b, 1));
            events.push((d, -1));
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (mut l1, mut l2) = (0.0, 0.0);
    let mut level = 0i32;
    for w in 0..events.len() {
        level += events[w].1;
        if let Some(next) = events.get(w + 1) {
            let h = next.0 - events[w].0;
            let c = level as f64;
            l1 += c * h;
            l2 += c * c * h;
        }
    }
    (l1, l2.sqrt())
}

/// Vertices of the first persistence landscape (upper envelope of the tent
/// functions) as a polyline. Between listed vertices the landscape is linear.
pub fn landscape_envelope(bars: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut tents: Vec<(f64, f64)> = bars.iter().copied().filter(|(b, d)| d > b).collect();
    tents.sort_by(|x, y| x.0.total_cmp(&y.0).then(y.1.total_cmp(&x.1)));
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut reach = f64::NEG_INFINITY;
    for (b, d) in tents {
        // Nested under an earlier tent: invisible in the first layer.
        if d <= reach {
            continue;
        }
        if b >= reach {
            if reach.is_finite() {
                pts.push((reach, 0.0));
            }
            pts.push((b, 0.0));
        } else {
            // Rising edge of the new tent meets the falling edge of the leader.
            let x = 0.5 * (b + reach);
            pts.push((x, x - b));
        }
        let mid = 0.5 * (b + d);
        pts.push((mid, mid - b));
        reach = d;
    }
    if reach.is_finite() {
        pts.push((reach, 0.0));
    }
    pts
}

/// L1 and L2 norms of the first landscape, integrated exactly over its
/// linear pieces.
pub fn landscape_norms(bars: &[(f64, f64)]) -> (f64, f64) {
    let pts = landscape_envelope(bars);
    let (mut l1, mut l2) = (0.0, 0.0);
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let h = x1 - x0;
        l1 += 0.5 * h * (y0 + y1);
        l2 += h * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0;
    }
    (l1, l2.sqrt())
}
