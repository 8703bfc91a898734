//! Potentials `V` on R^d, their JSON description and point sampling.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{check_dim, dist, BoxD, Grid, Point};
use crate::scalar::{cx, Cx, Real};

/// Closed-form families and sampled fields.
#[derive(Debug, Clone)]
pub enum Variant<T: Real> {
    /// `depth` on the cube `|x - center|_inf <= half_width`.
    SquareWell {
        depth: Cx<T>,
        half_width: T,
        center: Point<T>,
    },
    /// `depth` on the Euclidean ball `|x - center| <= radius`.
    Ball {
        depth: Cx<T>,
        radius: T,
        center: Point<T>,
    },
    /// `amplitude * exp(-|x - center|^2 / width^2)`.
    Gaussian {
        amplitude: Cx<T>,
        width: T,
        center: Point<T>,
    },
    /// `strength / |x|^exponent` on the shell `inner_cutoff <= |x| <= outer_cutoff`.
    InverseSquare {
        strength: T,
        exponent: T,
        inner_cutoff: T,
        outer_cutoff: T,
    },
    /// Piecewise constant on the cells of `grid`.
    Sampled {
        grid: Arc<Grid<T>>,
        values: Arc<Vec<Cx<T>>>,
    },
}

/// A potential together with the finite box it is truncated to.
#[derive(Debug, Clone)]
pub struct PotentialSpec<T: Real> {
    pub d: usize,
    pub variant: Variant<T>,
    pub support: BoxD<T>,
}

fn point_from<T: Real>(v: &[T], d: usize) -> Result<Point<T>> {
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
        });
    }
    let mut p = [T::zero(); 3];
    p[..d].copy_from_slice(v);
    Ok(p)
}

impl<T: Real> PotentialSpec<T> {
    pub fn new(d: usize, variant: Variant<T>, support: BoxD<T>) -> Result<Self> {
        let spec = PotentialSpec {
            d,
            variant,
            support,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn square_well(d: usize, depth: Cx<T>, half_width: T, center: &[T]) -> Result<Self> {
        let center = point_from(center, d)?;
        let support = BoxD::new(
            (0..d).map(|a| center[a] - half_width).collect(),
            (0..d).map(|a| center[a] + half_width).collect(),
        )?;
        Self::new(
            d,
            Variant::SquareWell {
                depth,
                half_width,
                center,
            },
            support,
        )
    }

    /// Indicator-type well on the unit cube `[0,1)^d`, scaled by `depth`.
    pub fn unit_cube(d: usize, depth: T) -> Result<Self> {
        let half = T::lit(0.5);
        Self::square_well(d, cx(depth, T::zero()), half, &vec![half; d])
    }

    pub fn ball(d: usize, depth: Cx<T>, radius: T, center: &[T]) -> Result<Self> {
        let center = point_from(center, d)?;
        let support = BoxD::new(
            (0..d).map(|a| center[a] - radius).collect(),
            (0..d).map(|a| center[a] + radius).collect(),
        )?;
        Self::new(
            d,
            Variant::Ball {
                depth,
                radius,
                center,
            },
            support,
        )
    }

    /// Gaussian truncated to `center +- cutoff * width`.
    pub fn gaussian(d: usize, amplitude: Cx<T>, width: T, center: &[T], cutoff: T) -> Result<Self> {
        let center = point_from(center, d)?;
        let r = cutoff * width;
        let support = BoxD::new(
            (0..d).map(|a| center[a] - r).collect(),
            (0..d).map(|a| center[a] + r).collect(),
        )?;
        Self::new(
            d,
            Variant::Gaussian {
                amplitude,
                width,
                center,
            },
            support,
        )
    }

    /// `strength / |x|^exponent` on `inner <= |x| <= outer`, boxed by `[-outer, outer]^d`.
    pub fn inverse_square(d: usize, strength: T, exponent: T, inner: T, outer: T) -> Result<Self> {
        let support = BoxD::cube(d, -outer, outer)?;
        Self::new(
            d,
            Variant::InverseSquare {
                strength,
                exponent,
                inner_cutoff: inner,
                outer_cutoff: outer,
            },
            support,
        )
    }

    pub fn sampled(grid: Grid<T>, values: Vec<Cx<T>>) -> Result<Self> {
        let d = grid.dim();
        let support = grid.bbox.clone();
        Self::new(
            d,
            Variant::Sampled {
                grid: Arc::new(grid),
                values: Arc::new(values),
            },
            support,
        )
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.d)?;
        self.support.validate()?;
        if self.support.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: self.support.dim(),
            });
        }
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match &self.variant {
            Variant::SquareWell { half_width, .. } => positive("halfWidth", *half_width),
            Variant::Ball { radius, .. } => positive("radius", *radius),
            Variant::Gaussian { width, .. } => positive("width", *width),
            Variant::InverseSquare {
                strength,
                exponent,
                inner_cutoff,
                outer_cutoff,
            } => {
                if *strength < T::zero() {
                    return Err(Error::InvalidParameter("strength must be >= 0".into()));
                }
                if !(*exponent > T::zero() && *exponent <= T::lit(2.0)) {
                    return Err(Error::InvalidParameter(format!(
                        "exponent must lie in (0, 2], got {exponent}"
                    )));
                }
                // the singular core is removed by the cutoff; cell-averaged
                // quadrature of the bare singularity is not provided
                positive("innerCutoff", *inner_cutoff)?;
                if outer_cutoff <= inner_cutoff {
                    return Err(Error::InvalidParameter(
                        "outerCutoff must exceed innerCutoff".into(),
                    ));
                }
                Ok(())
            }
            Variant::Sampled { grid, values } => {
                if grid.dim() != self.d {
                    return Err(Error::DimensionMismatch {
                        expected: self.d,
                        found: grid.dim(),
                    });
                }
                if values.len() != grid.len() {
                    return Err(Error::InvalidParameter(format!(
                        "sampled array has {} values for {} grid points",
                        values.len(),
                        grid.len()
                    )));
                }
                Ok(())
            }
        }
    }

    fn in_support(&self, x: &Point<T>) -> bool {
        (0..self.d).all(|a| x[a] >= self.support.lo[a] && x[a] < self.support.hi[a])
    }

    /// Value of `V` at `x` (zero outside the half-open support box).
    pub fn eval(&self, x: &Point<T>) -> Cx<T> {
        let zero = Cx::new(T::zero(), T::zero());
        if !self.in_support(x) {
            return zero;
        }
        match &self.variant {
            Variant::SquareWell {
                depth,
                half_width,
                center,
            } => {
                if (0..self.d)
                    .all(|a| x[a] >= center[a] - *half_width && x[a] < center[a] + *half_width)
                {
                    *depth
                } else {
                    zero
                }
            }
            Variant::Ball {
                depth,
                radius,
                center,
            } => {
                if dist(x, center) <= *radius {
                    *depth
                } else {
                    zero
                }
            }
            Variant::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let r = dist(x, center) / *width;
                *amplitude * (-(r * r)).exp()
            }
            Variant::InverseSquare {
                strength,
                exponent,
                inner_cutoff,
                outer_cutoff,
            } => {
                let r = dist(x, &[T::zero(); 3]);
                if r < *inner_cutoff || r > *outer_cutoff {
                    zero
                } else {
                    cx(*strength / r.powf(*exponent), T::zero())
                }
            }
            Variant::Sampled { grid, values } => grid.locate(x).map_or(zero, |i| values[i]),
        }
    }

    /// Upper bound of `|V|` over the box `[lo, hi]`.
    pub fn max_abs_on(&self, lo: &[T], hi: &[T]) -> T {
        let d = self.d;
        let mut blo = [T::zero(); 3];
        let mut bhi = [T::zero(); 3];
        for a in 0..d {
            blo[a] = lo[a].max(self.support.lo[a]);
            bhi[a] = hi[a].min(self.support.hi[a]);
            if blo[a] > bhi[a] {
                return T::zero();
            }
        }
        let near = |c: &Point<T>| -> T {
            let mut s = T::zero();
            for a in 0..d {
                let g = (blo[a] - c[a]).max(c[a] - bhi[a]).max(T::zero());
                s += g * g;
            }
            s.sqrt()
        };
        let far = |c: &Point<T>| -> T {
            let mut s = T::zero();
            for a in 0..d {
                let g = (c[a] - blo[a]).abs().max((bhi[a] - c[a]).abs());
                s += g * g;
            }
            s.sqrt()
        };
        match &self.variant {
            Variant::SquareWell {
                depth,
                half_width,
                center,
            } => {
                let hit = (0..d).all(|a| {
                    blo[a] <= center[a] + *half_width && bhi[a] >= center[a] - *half_width
                });
                if hit {
                    depth.norm()
                } else {
                    T::zero()
                }
            }
            Variant::Ball {
                depth,
                radius,
                center,
            } => {
                if near(center) <= *radius {
                    depth.norm()
                } else {
                    T::zero()
                }
            }
            Variant::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let r = near(center) / *width;
                amplitude.norm() * (-(r * r)).exp()
            }
            Variant::InverseSquare {
                strength,
                exponent,
                inner_cutoff,
                outer_cutoff,
            } => {
                let origin = [T::zero(); 3];
                let rmin = near(&origin);
                if rmin > *outer_cutoff || far(&origin) < *inner_cutoff {
                    T::zero()
                } else {
                    *strength / rmin.max(*inner_cutoff).powf(*exponent)
                }
            }
            Variant::Sampled { grid, values } => {
                let h = grid.spacing();
                let mut range = [(0usize, 1usize); 3];
                for a in 0..d {
                    let n = grid.points_per_axis[a];
                    let i0 = ((blo[a] - grid.bbox.lo[a]) / h[a]).floor().max(T::zero());
                    let i1 = ((bhi[a] - grid.bbox.lo[a]) / h[a]).floor();
                    let i0 = i0.to_usize().unwrap_or(0).min(n - 1);
                    let i1 = i1.to_usize().unwrap_or(0).min(n - 1);
                    range[a] = (i0, i1 + 1);
                }
                let dims = &grid.points_per_axis;
                let stride1 = dims[0];
                let stride2 = if d > 1 { dims[0] * dims[1] } else { 0 };
                let mut m = T::zero();
                for k in range[2].0..range[2].1 {
                    for j in range[1].0..range[1].1 {
                        for i in range[0].0..range[0].1 {
                            let flat = i + j * stride1 + k * stride2;
                            m = m.max(values[flat].norm());
                        }
                    }
                }
                m
            }
        }
    }

    /// The dilated potential `x -> V(t x)`.
    pub fn dilate(&self, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::InvalidParameter(
                "dilation factor must be positive".into(),
            ));
        }
        let shrink = |c: &Point<T>| [c[0] / t, c[1] / t, c[2] / t];
        let variant = match &self.variant {
            Variant::SquareWell {
                depth,
                half_width,
                center,
            } => Variant::SquareWell {
                depth: *depth,
                half_width: *half_width / t,
                center: shrink(center),
            },
            Variant::Ball {
                depth,
                radius,
                center,
            } => Variant::Ball {
                depth: *depth,
                radius: *radius / t,
                center: shrink(center),
            },
            Variant::Gaussian {
                amplitude,
                width,
                center,
            } => Variant::Gaussian {
                amplitude: *amplitude,
                width: *width / t,
                center: shrink(center),
            },
            Variant::InverseSquare {
                strength,
                exponent,
                inner_cutoff,
                outer_cutoff,
            } => Variant::InverseSquare {
                strength: *strength / t.powf(*exponent),
                exponent: *exponent,
                inner_cutoff: *inner_cutoff / t,
                outer_cutoff: *outer_cutoff / t,
            },
            Variant::Sampled { grid, values } => Variant::Sampled {
                grid: Arc::new(grid.shrink(t)?),
                values: values.clone(),
            },
        };
        Self::new(self.d, variant, self.support.shrink(t))
    }

    /// The potential `c V`.
    pub fn scale(&self, c: Cx<T>) -> Result<Self> {
        let variant = match &self.variant {
            Variant::SquareWell {
                depth,
                half_width,
                center,
            } => Variant::SquareWell {
                depth: *depth * c,
                half_width: *half_width,
                center: *center,
            },
            Variant::Ball {
                depth,
                radius,
                center,
            } => Variant::Ball {
                depth: *depth * c,
                radius: *radius,
                center: *center,
            },
            Variant::Gaussian {
                amplitude,
                width,
                center,
            } => Variant::Gaussian {
                amplitude: *amplitude * c,
                width: *width,
                center: *center,
            },
            Variant::InverseSquare {
                strength,
                exponent,
                inner_cutoff,
                outer_cutoff,
            } => {
                if c.im != T::zero() || c.re < T::zero() {
                    return Err(Error::InvalidParameter(
                        "inverse-square strength scales by nonnegative reals only".into(),
                    ));
                }
                Variant::InverseSquare {
                    strength: *strength * c.re,
                    exponent: *exponent,
                    inner_cutoff: *inner_cutoff,
                    outer_cutoff: *outer_cutoff,
                }
            }
            Variant::Sampled { grid, values } => Variant::Sampled {
                grid: grid.clone(),
                values: Arc::new(values.iter().map(|v| *v * c).collect()),
            },
        };
        Self::new(self.d, variant, self.support.clone())
    }

    /// `int |V|` over the support, by midpoint quadrature with `n` cells per axis
    /// (exact for a square well aligned with its box).
    pub fn l1_norm(&self, n: usize) -> Result<T> {
        if let Variant::SquareWell { depth, .. } = &self.variant {
            return Ok(depth.norm() * self.support.volume());
        }
        let g = Grid::uniform(self.support.clone(), n)?;
        Ok(g.nodes
            .iter()
            .zip(&g.weights)
            .map(|(x, w)| self.eval(x).norm() * *w)
            .sum())
    }

    /// True if `V` takes real nonnegative values everywhere it is defined.
    pub fn is_nonnegative(&self) -> bool {
        let ok = |z: &Cx<T>| z.im == T::zero() && z.re >= T::zero();
        match &self.variant {
            Variant::SquareWell { depth, .. } | Variant::Ball { depth, .. } => ok(depth),
            Variant::Gaussian { amplitude, .. } => ok(amplitude),
            Variant::InverseSquare { .. } => true,
            Variant::Sampled { values, .. } => values.iter().all(ok),
        }
    }
}

/// Values of `V` at the grid nodes.
pub fn sample_potential<T: Real>(spec: &PotentialSpec<T>, grid: &Grid<T>) -> Result<Vec<Cx<T>>> {
    if spec.d != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.d,
            found: grid.dim(),
        });
    }
    Ok(grid.nodes.iter().map(|x| spec.eval(x)).collect())
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxJson {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// On-disk description of a potential.
///
/// `variant` selects which of the optional fields are required:
/// `squareWell` (depth, halfWidth, center), `ball` (depth, radius, center),
/// `gaussian` (amplitude, width, center), `inverseSquare` (strength,
/// exponent, innerCutoff, outerCutoff) and `sampled` (points, file). Complex
/// values are `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct PotentialJson {
    pub d: usize,
    pub variant: String,
    #[serde(rename = "box")]
    pub bbox: BoxJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

fn need<V: Clone>(v: &Option<V>, key: &str, variant: &str) -> Result<V> {
    v.clone()
        .ok_or_else(|| Error::Parse(format!("variant `{variant}` requires key `{key}`")))
}

impl PotentialJson {
    /// Builds the potential; relative `file` paths resolve against `base_dir`.
    pub fn into_spec(self, base_dir: Option<&Path>) -> Result<PotentialSpec<f64>> {
        let d = self.d;
        check_dim(d)?;
        let support = BoxD::new(self.bbox.lo.clone(), self.bbox.hi.clone())?;
        let c = |v: [f64; 2]| Cx::new(v[0], v[1]);
        let v = self.variant.as_str();
        let variant = match v {
            "squareWell" => Variant::SquareWell {
                depth: c(need(&self.depth, "depth", v)?),
                half_width: need(&self.half_width, "halfWidth", v)?,
                center: point_from(&need(&self.center, "center", v)?, d)?,
            },
            "ball" => Variant::Ball {
                depth: c(need(&self.depth, "depth", v)?),
                radius: need(&self.radius, "radius", v)?,
                center: point_from(&need(&self.center, "center", v)?, d)?,
            },
            "gaussian" => Variant::Gaussian {
                amplitude: c(need(&self.amplitude, "amplitude", v)?),
                width: need(&self.width, "width", v)?,
                center: point_from(&need(&self.center, "center", v)?, d)?,
            },
            "inverseSquare" => Variant::InverseSquare {
                strength: need(&self.strength, "strength", v)?,
                exponent: self.exponent.unwrap_or(2.0),
                inner_cutoff: need(&self.inner_cutoff, "innerCutoff", v)?,
                outer_cutoff: need(&self.outer_cutoff, "outerCutoff", v)?,
            },
            "sampled" => {
                let points = need(&self.points, "points", v)?;
                let mut path = need(&self.file, "file", v)?;
                if path.is_relative() {
                    if let Some(base) = base_dir {
                        path = base.join(path);
                    }
                }
                let grid = Grid::new(support.clone(), points)?;
                let values = read_samples(&path)?;
                Variant::Sampled {
                    grid: Arc::new(grid),
                    values: Arc::new(values),
                }
            }
            other => {
                return Err(Error::Parse(format!("unknown potential variant `{other}`")));
            }
        };
        PotentialSpec::new(d, variant, support)
    }
}

/// Reads a potential description from a JSON file.
pub fn load_potential(path: &Path) -> Result<PotentialSpec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let json: PotentialJson = serde_json::from_str(&text)?;
    json.into_spec(path.parent())
}

/// Reads interleaved little-endian `(re, im)` f64 pairs.
pub fn read_samples(path: &Path) -> Result<Vec<Cx<f64>>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() % 16 != 0 {
        return Err(Error::Parse(format!(
            "{}: length {} is not a multiple of 16",
            path.display(),
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Cx::new(re, im)
        })
        .collect())
}

pub fn write_samples(path: &Path, values: &[Cx<f64>]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    let mut buf = Vec::with_capacity(values.len() * 16);
    for v in values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    f.write_all(&buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn closed_forms_at_nodes() {
        let w = PotentialSpec::square_well(1, Complex64::new(-2.0, 0.0), 0.5, &[0.0]).unwrap();
        assert_eq!(w.eval(&[0.0; 3]), Complex64::new(-2.0, 0.0));
        let g = PotentialSpec::gaussian(3, Complex64::new(1.0, 1.0), 1.0, &[0.0; 3], 4.0).unwrap();
        assert_eq!(g.eval(&[0.0; 3]), Complex64::new(1.0, 1.0));
        let inv = PotentialSpec::inverse_square(3, 1.0, 2.0, 0.1, 2.0).unwrap();
        assert!((inv.eval(&[0.5, 0.0, 0.0]).re - 4.0f64).abs() < 1e-14);
        assert_eq!(inv.eval(&[0.05, 0.0, 0.0]).re, 0.0);
    }

    #[test]
    fn dimension_mismatch_on_sampling() {
        let w = PotentialSpec::square_well(1, Complex64::new(-2.0, 0.0), 0.5, &[0.0]).unwrap();
        let g = Grid::uniform(BoxD::cube(2, -1.0, 1.0).unwrap(), 4).unwrap();
        assert!(matches!(
            sample_potential(&w, &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bare_singularity_rejected() {
        assert!(PotentialSpec::<f64>::inverse_square(3, 1.0, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn max_bound_dominates_samples() {
        let specs = vec![
            PotentialSpec::gaussian(2, Complex64::new(0.5, -1.0), 0.7, &[0.2, -0.1], 4.0).unwrap(),
            PotentialSpec::inverse_square(2, 2.0, 1.5, 0.05, 1.0).unwrap(),
            PotentialSpec::ball(2, Complex64::new(3.0, 0.0), 0.4, &[0.1, 0.1]).unwrap(),
        ];
        let lo = [0.0, 0.0];
        let hi = [0.5, 0.25];
        let g = Grid::uniform(BoxD::new(lo.to_vec(), hi.to_vec()).unwrap(), 33).unwrap();
        for s in &specs {
            let m = s.max_abs_on(&lo, &hi);
            for x in &g.nodes {
                assert!(s.eval(x).norm() <= m * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn dilation_matches_definition() {
        let g = PotentialSpec::gaussian(3, Complex64::new(1.0, 0.5), 1.0, &[0.3, 0.2, 0.1], 3.0)
            .unwrap();
        let t = 2.0;
        let gt = g.dilate(t).unwrap();
        for x in [[0.1, 0.0, 0.05], [-0.3, 0.2, 0.4]] {
            let tx = [t * x[0], t * x[1], t * x[2]];
            assert!((gt.eval(&x) - g.eval(&tx)).norm() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip_sampled() {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::uniform(BoxD::cube(2, 0.0, 1.0).unwrap(), 3).unwrap();
        let vals: Vec<_> = (0..9)
            .map(|i| Complex64::new(i as f64, -(i as f64)))
            .collect();
        write_samples(&dir.path().join("v.bin"), &vals).unwrap();
        let text = r#"{"d":2,"variant":"sampled","points":[3,3],"file":"v.bin",
                      "box":{"lo":[0,0],"hi":[1,1]}}"#;
        std::fs::write(dir.path().join("p.json"), text).unwrap();
        let spec = load_potential(&dir.path().join("p.json")).unwrap();
        let got = sample_potential(&spec, &grid).unwrap();
        assert_eq!(got, vals);
    }

    #[test]
    fn unknown_json_key_rejected() {
        let text = r#"{"d":1,"variant":"gaussian","amplitude":[1,0],"width":1,"center":[0],
                      "box":{"lo":[-1],"hi":[1]},"bogus":3}"#;
        let err = serde_json::from_str::<PotentialJson>(text).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }
}
