//! Sphere heatmaps as plain-text PPM and field dumps as CSV.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Projection {
    Equirect,
    #[default]
    Robinson,
}

impl FromStr for Projection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equirect" => Ok(Projection::Equirect),
            "robinson" => Ok(Projection::Robinson),
            _ => Err(Error::InvalidArgument(format!("unknown projection {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorScale {
    /// Diverging map centered on zero, limits `+-max|v|`.
    Symmetric,
    /// Sequential map from the minimum to the maximum.
    MinMax,
}

impl ColorScale {
    /// Symmetric when any value is negative.
    pub fn auto(values: &[f64]) -> Self {
        if values.iter().any(|v| *v < 0.0) {
            ColorScale::Symmetric
        } else {
            ColorScale::MinMax
        }
    }
}

/// Image geometry: `n_theta` rows of colatitude, `n_phi` columns of azimuth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub projection: Projection,
    pub scale: Option<ColorScale>,
}

impl RenderSpec {
    pub fn new(n_theta: usize, n_phi: usize, projection: Projection) -> Result<Self> {
        if n_theta < 8 || n_phi < 16 {
            return Err(Error::InvalidArgument(format!(
                "grid {n_theta}x{n_phi} below the 8x16 minimum"
            )));
        }
        Ok(RenderSpec {
            n_theta,
            n_phi,
            projection,
            scale: None,
        })
    }

    /// Colatitudes `pi i / (n_theta - 1)`, poles included.
    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta)
            .map(|i| PI * i as f64 / (self.n_theta - 1) as f64)
            .collect()
    }

    /// Azimuths `2 pi j / n_phi`.
    pub fn phis(&self) -> Vec<f64> {
        (0..self.n_phi)
            .map(|j| 2.0 * PI * j as f64 / self.n_phi as f64)
            .collect()
    }

    /// `(theta, phi)` for every node, row-major.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let phis = self.phis();
        self.thetas()
            .into_iter()
            .flat_map(|t| phis.iter().map(move |&p| (t, p)))
            .collect()
    }
}

pub type Rgb = [u8; 3];

const DIVERGING: [(f64, [f64; 3]); 5] = [
    (0.0, [0.019, 0.188, 0.380]),
    (0.25, [0.263, 0.576, 0.765]),
    (0.5, [0.969, 0.969, 0.969]),
    (0.75, [0.839, 0.376, 0.302]),
    (1.0, [0.404, 0.0, 0.122]),
];

const SEQUENTIAL: [(f64, [f64; 3]); 5] = [
    (0.0, [0.001, 0.0, 0.014]),
    (0.25, [0.341, 0.062, 0.431]),
    (0.5, [0.735, 0.216, 0.330]),
    (0.75, [0.978, 0.557, 0.035]),
    (1.0, [0.988, 0.998, 0.645]),
];

fn interpolate(table: &[(f64, [f64; 3])], t: f64) -> Rgb {
    let t = if t.is_nan() { 0.5 } else { t.clamp(0.0, 1.0) };
    let k = table.windows(2).position(|w| t <= w[1].0).unwrap_or(table.len() - 2);
    let (t0, c0) = table[k];
    let (t1, c1) = table[k + 1];
    let u = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
    let mut out = [0u8; 3];
    for ch in 0..3 {
        out[ch] = ((c0[ch] + u * (c1[ch] - c0[ch])) * 255.0).round() as u8;
    }
    out
}

/// Maps values to colors.
pub fn colorize(values: &[f64], scale: ColorScale) -> Vec<Rgb> {
    match scale {
        ColorScale::Symmetric => {
            let m = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let m = if m > 0.0 { m } else { 1.0 };
            values
                .iter()
                .map(|v| interpolate(&DIVERGING, 0.5 + 0.5 * v / m))
                .collect()
        }
        ColorScale::MinMax => {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = if hi > lo { hi - lo } else { 1.0 };
            values
                .iter()
                .map(|v| interpolate(&SEQUENTIAL, (v - lo) / span))
                .collect()
        }
    }
}

/// Robinson parallel-length factors per 5 degrees of latitude.
const PLEN: [f64; 19] = [
    1.0000, 0.9986, 0.9954, 0.9900, 0.9822, 0.9730, 0.9600, 0.9427, 0.9216, 0.8962, 0.8679, 0.8350, 0.7986, 0.7597,
    0.7186, 0.6732, 0.6213, 0.5722, 0.5322,
];
/// Robinson parallel-distance factors per 5 degrees of latitude.
const PDFE: [f64; 19] = [
    0.0000, 0.0620, 0.1240, 0.1860, 0.2480, 0.3100, 0.3720, 0.4340, 0.4958, 0.5571, 0.6176, 0.6769, 0.7346, 0.7903,
    0.8435, 0.8936, 0.9394, 0.9761, 1.0000,
];
const ROBINSON_X: f64 = 0.8487;
const ROBINSON_Y: f64 = 1.3523;

fn table_lookup(table: &[f64; 19], lat_deg: f64) -> f64 {
    let a = lat_deg.abs().min(90.0) / 5.0;
    let k = (a.floor() as usize).min(17);
    let u = a - k as f64;
    table[k] + u * (table[k + 1] - table[k])
}

/// Forward Robinson projection of `(lat, lon)` in radians.
pub fn robinson_forward(lat: f64, lon: f64) -> (f64, f64) {
    let deg = lat.to_degrees();
    let x = ROBINSON_X * table_lookup(&PLEN, deg) * lon;
    let y = ROBINSON_Y * table_lookup(&PDFE, deg) * lat.signum();
    (x, y)
}

/// Inverse projection; `None` outside the map outline.
pub fn robinson_inverse(x: f64, y: f64) -> Option<(f64, f64)> {
    let target = (y / ROBINSON_Y).abs();
    if target > 1.0 {
        return None;
    }
    let k = PDFE.windows(2).position(|w| target <= w[1]).unwrap_or(17);
    let u = (target - PDFE[k]) / (PDFE[k + 1] - PDFE[k]);
    let lat_deg = 5.0 * (k as f64 + u);
    let lat = lat_deg.to_radians() * y.signum();
    let lon = x / (ROBINSON_X * table_lookup(&PLEN, lat_deg));
    if lon.abs() > PI + 1e-12 {
        return None;
    }
    Some((lat, lon))
}

/// An RGB raster.
#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl Image {
    /// Plain PPM (`P3`) with lines of at most 70 characters.
    pub fn to_ppm(&self) -> String {
        let mut out = format!("P3\n{} {}\n255\n", self.width, self.height);
        let mut line = String::new();
        for px in &self.pixels {
            for v in px {
                let tok = v.to_string();
                if !line.is_empty() && line.len() + 1 + tok.len() > 70 {
                    out.push_str(&line);
                    out.push('\n');
                    line.clear();
                }
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&tok);
            }
        }
        if !line.is_empty() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn write_ppm(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_ppm())?;
        Ok(())
    }
}

const BACKGROUND: Rgb = [255, 255, 255];

/// Renders row-major values on `spec.nodes()` to an image. North is at the
/// top; azimuth `pi` is the central meridian.
pub fn render(values: &[f64], spec: &RenderSpec) -> Result<Image> {
    let (nt, np) = (spec.n_theta, spec.n_phi);
    if values.len() != nt * np {
        return Err(Error::DimensionMismatch {
            expected: nt * np,
            got: values.len(),
        });
    }
    let scale = spec.scale.unwrap_or_else(|| ColorScale::auto(values));
    let colors = colorize(values, scale);
    match spec.projection {
        Projection::Equirect => Ok(Image {
            width: np,
            height: nt,
            pixels: colors,
        }),
        Projection::Robinson => {
            let width = np;
            let half_w = ROBINSON_X * PI;
            let height = ((width as f64) * ROBINSON_Y / half_w).round().max(2.0) as usize;
            let mut pixels = Vec::with_capacity(width * height);
            for r in 0..height {
                let y = ROBINSON_Y * (1.0 - 2.0 * (r as f64 + 0.5) / height as f64);
                for col in 0..width {
                    let x = half_w * (2.0 * (col as f64 + 0.5) / width as f64 - 1.0);
                    pixels.push(match robinson_inverse(x, y) {
                        None => BACKGROUND,
                        Some((lat, lon)) => {
                            let theta = PI / 2.0 - lat;
                            let phi = lon + PI;
                            let i = ((theta / PI) * (nt - 1) as f64).round() as usize;
                            let j = ((phi / (2.0 * PI)) * np as f64).round() as usize % np;
                            colors[i.min(nt - 1) * np + j]
                        }
                    });
                }
            }
            Ok(Image { width, height, pixels })
        }
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV of `(theta, phi, value)` rows.
pub fn field_csv(nodes: &[(f64, f64)], values: &[f64]) -> Result<String> {
    if nodes.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            got: values.len(),
        });
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theta", "phi", "value"]).map_err(csv_err)?;
    for (&(t, p), v) in nodes.iter().zip(values) {
        w.write_record([fmt17(t), fmt17(p), fmt17(*v)]).map_err(csv_err)?;
    }
    finish_csv(w)
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

pub(crate) fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Reads back a field CSV.
pub fn parse_field_csv(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::InvalidArgument("short CSV row".into()))?
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("{e}")))
        };
        out.push((num(0)?, num(1)?, num(2)?));
    }
    Ok(out)
}

/// Text summary of a field: range and location of the extremes.
pub fn describe(nodes: &[(f64, f64)], values: &[f64]) -> String {
    let mut s = String::new();
    if let (Some(imin), Some(imax)) = (argext(values, |a, b| a < b), argext(values, |a, b| a > b)) {
        let _ = write!(
            s,
            "min {:.6} at (theta {:.4}, phi {:.4}); max {:.6} at (theta {:.4}, phi {:.4})",
            values[imin], nodes[imin].0, nodes[imin].1, values[imax], nodes[imax].0, nodes[imax].1
        );
    }
    s
}

fn argext(values: &[f64], better: impl Fn(f64, f64) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| better(*v, values[b])) {
            best = Some(i);
        }
    }
    best
}

pub fn write_text(path: &std::path::Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn robinson_round_trip() {
        for lat_deg in [-87.0, -45.0, -2.5, 0.0, 12.0, 60.0, 89.0] {
            for lon in [-3.0, -1.0, 0.0, 0.5, 3.1] {
                let lat = f64::to_radians(lat_deg);
                let (x, y) = robinson_forward(lat, lon);
                let (lat2, lon2) = robinson_inverse(x, y).unwrap();
                assert!((lat - lat2).abs() < 1e-12 && (lon - lon2).abs() < 1e-12);
            }
        }
        assert!(robinson_inverse(0.0, 1.5).is_none());
        assert!(robinson_inverse(ROBINSON_X * PI * 0.99, ROBINSON_Y * 0.99).is_none());
        let (x, y) = robinson_forward(PI / 2.0, PI);
        assert!((y - ROBINSON_Y).abs() < 1e-15 && (x - ROBINSON_X * 0.5322 * PI).abs() < 1e-12);
    }

    #[test]
    fn robinson_rows_are_monotone() {
        let mut prev = -1.0;
        for k in 0..=900 {
            let lat = (k as f64 / 10.0).to_radians();
            let (_, y) = robinson_forward(lat, 0.0);
            assert!(y >= prev);
            prev = y;
        }
    }

    #[test]
    fn color_scales() {
        assert_eq!(ColorScale::auto(&[0.0, 1.0]), ColorScale::MinMax);
        assert_eq!(ColorScale::auto(&[-0.1, 1.0]), ColorScale::Symmetric);
        let c = colorize(&[-1.0, 0.0, 1.0], ColorScale::Symmetric);
        assert_eq!(c[1], [247, 247, 247]);
        assert_ne!(c[0], c[2]);
        let c = colorize(&[2.0, 2.0], ColorScale::MinMax);
        assert_eq!(c[0], c[1]);
    }

    #[test]
    fn ppm_format() {
        let img = Image {
            width: 2,
            height: 1,
            pixels: vec![[1, 2, 3], [255, 0, 9]],
        };
        assert_eq!(img.to_ppm(), "P3\n2 1\n255\n1 2 3 255 0 9\n");
        let wide = Image {
            width: 30,
            height: 1,
            pixels: vec![[255, 255, 255]; 30],
        };
        assert!(wide.to_ppm().lines().all(|l| l.len() <= 70));
    }

    #[test]
    fn render_shapes() {
        let spec = RenderSpec::new(8, 16, Projection::Equirect).unwrap();
        let values: Vec<f64> = spec.nodes().iter().map(|(t, _)| t.cos()).collect();
        let img = render(&values, &spec).unwrap();
        assert_eq!((img.width, img.height), (16, 8));
        let rob = render(
            &values,
            &RenderSpec {
                projection: Projection::Robinson,
                ..spec
            },
        )
        .unwrap();
        assert_eq!(rob.width, 16);
        assert_eq!(rob.pixels.len(), rob.width * rob.height);
        assert!(RenderSpec::new(4, 16, Projection::Equirect).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let nodes = vec![(0.1, 0.2), (1.0 / 3.0, PI)];
        let values = vec![-1.0 / 7.0, 1e-300];
        let text = field_csv(&nodes, &values).unwrap();
        assert!(text.starts_with("theta,phi,value\n"));
        let back = parse_field_csv(&text).unwrap();
        for ((t, p, v), (&(t0, p0), v0)) in back.iter().zip(nodes.iter().zip(&values)) {
            assert_eq!((*t, *p, *v), (t0, p0, *v0));
        }
    }
}
