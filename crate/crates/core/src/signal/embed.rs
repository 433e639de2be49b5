use crate::error::{Error, Result};

/// Points of equal dimension stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::invalid(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point cloud has non-finite coordinates"));
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(1, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::invalid("points differ in dimension"));
        }
        PointCloud::new(dim, points.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }
}

/// Delay embedding of `x` into `R^d`: points `(x[s], .., x[s+d-1])` for
/// `s = 0, shift, 2*shift, ..` while the point fits.
pub fn delay_embedding(x: &[f64], d: usize, point_shift: usize) -> Result<PointCloud> {
    if d < 2 || point_shift == 0 {
        return Err(Error::invalid(format!(
            "embedding needs d >= 2 and a positive shift (d = {d}, shift = {point_shift})"
        )));
    }
    if d > x.len() {
        return Err(Error::DimensionTooLarge { dim: d, len: x.len() });
    }
    let count = (x.len() - d) / point_shift + 1;
    let mut coords = Vec::with_capacity(count * d);
    for i in 0..count {
        let s = i * point_shift;
        coords.extend_from_slice(&x[s..s + d]);
    }
    PointCloud::new(d, coords)
}
