//! Probabilistic iterated-function systems and the chaos game, with the
//! classic four-rule fern as the built-in system, plus raster (PGM) and CSV
//! emission.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::{self, RngSeed};

/// Probabilities of an IFS must sum to 1 within this.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// Determinant threshold below which (I − linear) counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }
}

/// One affine rule x → linear·x + offset, chosen with `probability`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap {
    /// Row-major 2×2 matrix.
    pub linear: [[f64; 2]; 2],
    pub offset: [f64; 2],
    pub probability: f64,
}

impl AffineMap {
    pub fn new(linear: [[f64; 2]; 2], offset: [f64; 2], probability: f64) -> Result<Self> {
        let entries = linear.iter().flatten().chain(offset.iter());
        if entries.clone().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("affine map entries must be finite".into()));
        }
        if !(0.0..=1.0).contains(&probability) {
            return Err(Error::InvalidInput(format!(
                "probability {probability} outside [0, 1]"
            )));
        }
        Ok(AffineMap {
            linear,
            offset,
            probability,
        })
    }
}

/// linear·p + offset.
pub fn apply_map(m: &AffineMap, p: Point2) -> Point2 {
    Point2 {
        x: m.linear[0][0] * p.x + m.linear[0][1] * p.y + m.offset[0],
        y: m.linear[1][0] * p.x + m.linear[1][1] * p.y + m.offset[1],
    }
}

/// Solves (I − linear)·p = offset by 2×2 elimination with partial pivoting.
pub fn fixed_point(m: &AffineMap) -> Result<Point2> {
    let a = [
        [1.0 - m.linear[0][0], -m.linear[0][1]],
        [-m.linear[1][0], 1.0 - m.linear[1][1]],
    ];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < SINGULAR_TOL {
        return Err(Error::NoFixedPoint);
    }
    let (top, bottom, b) = if a[0][0].abs() >= a[1][0].abs() {
        (a[0], a[1], [m.offset[0], m.offset[1]])
    } else {
        (a[1], a[0], [m.offset[1], m.offset[0]])
    };
    let factor = bottom[0] / top[0];
    let reduced = bottom[1] - factor * top[1];
    let y = (b[1] - factor * b[0]) / reduced;
    let x = (b[0] - top[1] * y) / top[0];
    Ok(Point2 { x, y })
}

/// An ordered list of affine rules whose probabilities sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IfsSystem {
    maps: Vec<AffineMap>,
}

impl IfsSystem {
    pub fn new(maps: Vec<AffineMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidInput("an IFS needs at least one map".into()));
        }
        let total: f64 = maps.iter().map(|m| m.probability).sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "map probabilities sum to {total}, expected 1"
            )));
        }
        Ok(IfsSystem { maps })
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    /// The classic four-rule fern: a contraction onto the stem, the main
    /// frond spiral, and two mirrored side fronds.
    pub fn barnsley_fern() -> IfsSystem {
        let maps = vec![
            AffineMap::new([[0.0, 0.0], [0.0, 0.16]], [0.0, 0.0], 0.01),
            AffineMap::new([[0.85, 0.04], [-0.04, 0.85]], [0.0, 1.6], 0.85),
            AffineMap::new([[0.2, -0.26], [0.23, 0.22]], [0.0, 1.6], 0.07),
            AffineMap::new([[-0.15, 0.28], [0.26, 0.24]], [0.0, 0.44], 0.07),
        ];
        IfsSystem::new(maps.into_iter().collect::<Result<Vec<_>>>().expect("valid constants"))
            .expect("probabilities sum to 1")
    }
}

/// Runs the chaos game and also returns how often each map was selected
/// (counted over all `iterations` steps, burn-in included).
pub fn chaos_game_traced(
    sys: &IfsSystem,
    iterations: usize,
    burn_in: usize,
    seed: RngSeed,
) -> Result<(Vec<Point2>, Vec<u64>)> {
    if iterations <= burn_in {
        return Err(Error::InvalidOptions(format!(
            "iterations ({iterations}) must exceed burn_in ({burn_in})"
        )));
    }
    let mut rng = rng::rng_from_seed(seed);
    let mut counts = vec![0u64; sys.maps.len()];
    let mut points = Vec::with_capacity(iterations - burn_in);
    let mut current = Point2::new(0.0, 0.0);
    for step in 0..iterations {
        let draw = rng::uniform01(&mut rng);
        let mut selected = sys.maps.len() - 1;
        let mut cumulative = 0.0;
        for (k, map) in sys.maps.iter().enumerate() {
            cumulative += map.probability;
            if draw < cumulative {
                selected = k;
                break;
            }
        }
        counts[selected] += 1;
        current = apply_map(&sys.maps[selected], current);
        if step >= burn_in {
            points.push(current);
        }
    }
    Ok((points, counts))
}

/// Chaos game from (0,0): selects a map per step by cumulative-probability
/// inversion of one uniform draw, discards the first `burn_in` points, and
/// returns the remaining `iterations − burn_in` points in order.
pub fn chaos_game(
    sys: &IfsSystem,
    iterations: usize,
    burn_in: usize,
    seed: RngSeed,
) -> Result<Vec<Point2>> {
    chaos_game_traced(sys, iterations, burn_in, seed).map(|(points, _)| points)
}

/// Axis-aligned view rectangle for rasterization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundingBox {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let bbox = BoundingBox {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        if [x_min, x_max, y_min, y_max].iter().any(|v| !v.is_finite())
            || x_max <= x_min
            || y_max <= y_min
        {
            return Err(Error::InvalidOptions(format!(
                "degenerate bounding box [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(bbox)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}

/// The view that comfortably frames the built-in fern's attractor.
pub fn fern_view() -> BoundingBox {
    BoundingBox::new(-2.20, 2.70, -0.01, 10.00).expect("fixed nondegenerate box")
}

/// Hit counts and their log-scaled 8-bit rendering, row-major with row 0 at
/// the top of the image (largest y).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub bbox: BoundingBox,
    counts: Vec<u64>,
    pixels: Vec<u8>,
}

impl Raster {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Fraction of pixels hit at least once.
    pub fn nonzero_fraction(&self) -> f64 {
        let nonzero = self.counts.iter().filter(|&&c| c > 0).count();
        nonzero as f64 / self.counts.len() as f64
    }

    /// Fraction of pixels whose occupancy (hit vs not hit) differs from the
    /// other raster's.
    pub fn occupancy_difference(&self, other: &Raster) -> f64 {
        assert_eq!(self.counts.len(), other.counts.len(), "raster shapes differ");
        let differing = self
            .counts
            .iter()
            .zip(&other.counts)
            .filter(|(&a, &b)| (a > 0) != (b > 0))
            .count();
        differing as f64 / self.counts.len() as f64
    }
}

/// Accumulates hit counts per pixel and log-scales them to 0–255 with
/// intensity log(1+hits) (linear scaling would let the dense stem wash out
/// the fronds). Points outside the bbox are ignored; the right and top
/// edges are inclusive.
pub fn rasterize(points: &[Point2], width: usize, height: usize, bbox: BoundingBox) -> Result<Raster> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidOptions(format!(
            "raster dimensions must be at least 1x1, got {width}x{height}"
        )));
    }
    // Re-check in case the box was built directly rather than via new().
    BoundingBox::new(bbox.x_min, bbox.x_max, bbox.y_min, bbox.y_max)?;

    let mut counts = vec![0u64; width * height];
    let x_scale = width as f64 / (bbox.x_max - bbox.x_min);
    let y_scale = height as f64 / (bbox.y_max - bbox.y_min);
    for p in points {
        if !bbox.contains(*p) {
            continue;
        }
        let col = (((p.x - bbox.x_min) * x_scale) as usize).min(width - 1);
        // Row 0 is the top of the image: largest y.
        let row_from_bottom = (((p.y - bbox.y_min) * y_scale) as usize).min(height - 1);
        let row = height - 1 - row_from_bottom;
        counts[row * width + col] += 1;
    }

    let max_count = counts.iter().copied().max().unwrap_or(0);
    let pixels = if max_count == 0 {
        vec![0u8; width * height]
    } else {
        let scale = 255.0 / (1.0 + max_count as f64).ln();
        counts
            .iter()
            .map(|&c| ((1.0 + c as f64).ln() * scale).round() as u8)
            .collect()
    };

    Ok(Raster {
        width,
        height,
        bbox,
        counts,
        pixels,
    })
}

/// ASCII PGM (P2), max value 255, rows emitted top to bottom.
pub fn to_pgm(raster: &Raster) -> String {
    let mut out = String::with_capacity(raster.pixels.len() * 4 + 32);
    out.push_str("P2\n");
    out.push_str(&format!("{} {}\n255\n", raster.width, raster.height));
    for row in raster.pixels.chunks(raster.width) {
        let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// CSV with header "x,y", one point per line, 6 decimal places.
pub fn points_to_csv(points: &[Point2]) -> String {
    let mut out = String::with_capacity(points.len() * 20 + 4);
    out.push_str("x,y\n");
    for p in points {
        out.push_str(&format!("{:.6},{:.6}\n", p.x, p.y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_map_matches_hand_arithmetic() {
        let fern = IfsSystem::barnsley_fern();
        let maps = fern.maps();
        let origin = Point2::new(0.0, 0.0);
        let p1 = apply_map(&maps[0], origin);
        assert_eq!((p1.x, p1.y), (0.0, 0.0));
        let p2 = apply_map(&maps[1], origin);
        assert!((p2.x - 0.0).abs() < 1e-15 && (p2.y - 1.6).abs() < 1e-15);
        let p4 = apply_map(&maps[3], Point2::new(1.0, 0.0));
        assert!((p4.x - (-0.15)).abs() < 1e-12);
        assert!((p4.y - 0.70).abs() < 1e-12);
    }

    #[test]
    fn apply_map_is_affine() {
        let fern = IfsSystem::barnsley_fern();
        let p = Point2::new(0.3, -1.2);
        let q = Point2::new(-2.0, 4.5);
        let alpha = 0.37;
        for m in fern.maps() {
            let mixed = Point2::new(
                alpha * p.x + (1.0 - alpha) * q.x,
                alpha * p.y + (1.0 - alpha) * q.y,
            );
            let lhs = apply_map(m, mixed);
            let fp = apply_map(m, p);
            let fq = apply_map(m, q);
            let rhs = Point2::new(
                alpha * fp.x + (1.0 - alpha) * fq.x,
                alpha * fp.y + (1.0 - alpha) * fq.y,
            );
            assert!((lhs.x - rhs.x).abs() < 1e-12);
            assert!((lhs.y - rhs.y).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_points_are_fixed() {
        let fern = IfsSystem::barnsley_fern();
        for m in fern.maps() {
            let fp = fixed_point(m).unwrap();
            let image = apply_map(m, fp);
            assert!((image.x - fp.x).abs() < 1e-10);
            assert!((image.y - fp.y).abs() < 1e-10);
        }
    }

    #[test]
    fn main_frond_fixed_point_is_the_fern_tip() {
        // (I − L)p = b with L the main spiral: 0.15x − 0.04y = 0 and
        // 0.04x + 0.15y = 1.6, so x = 0.064/0.0241, y = 0.24/0.0241.
        let fern = IfsSystem::barnsley_fern();
        let tip = fixed_point(&fern.maps()[1]).unwrap();
        assert!((tip.x - 2.6556).abs() < 1e-3, "x = {}", tip.x);
        assert!((tip.y - 9.9585).abs() < 1e-3, "y = {}", tip.y);
        let stem = fixed_point(&fern.maps()[0]).unwrap();
        assert_eq!((stem.x, stem.y), (0.0, 0.0));
    }

    #[test]
    fn identity_map_has_no_fixed_point() {
        let m = AffineMap::new([[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5], 1.0).unwrap();
        assert!(matches!(fixed_point(&m), Err(Error::NoFixedPoint)));
    }

    #[test]
    fn construction_validates_probabilities() {
        assert!(AffineMap::new([[0.0; 2]; 2], [0.0; 2], 1.5).is_err());
        assert!(AffineMap::new([[f64::NAN, 0.0], [0.0, 0.0]], [0.0; 2], 0.5).is_err());
        let half = AffineMap::new([[0.5, 0.0], [0.0, 0.5]], [0.0; 2], 0.4).unwrap();
        assert!(IfsSystem::new(vec![half, half]).is_err());
        assert!(IfsSystem::new(vec![]).is_err());
    }

    #[test]
    fn single_step_applies_the_first_selected_map_to_the_origin() {
        let fern = IfsSystem::barnsley_fern();
        let points = chaos_game(&fern, 1, 0, RngSeed(123)).unwrap();
        assert_eq!(points.len(), 1);
        // Whichever map was selected, the image of (0,0) is its offset.
        let offsets: Vec<Point2> = fern
            .maps()
            .iter()
            .map(|m| apply_map(m, Point2::new(0.0, 0.0)))
            .collect();
        assert!(offsets.iter().any(|o| *o == points[0]));
    }

    #[test]
    fn chaos_game_is_deterministic_and_validates_counts() {
        let fern = IfsSystem::barnsley_fern();
        let a = chaos_game(&fern, 500, 100, RngSeed(9)).unwrap();
        let b = chaos_game(&fern, 500, 100, RngSeed(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 400);
        assert!(chaos_game(&fern, 100, 100, RngSeed(9)).is_err());
        assert!(chaos_game(&fern, 0, 0, RngSeed(9)).is_err());
    }

    #[test]
    fn traced_counts_cover_every_step() {
        let fern = IfsSystem::barnsley_fern();
        let (points, counts) = chaos_game_traced(&fern, 2000, 50, RngSeed(31)).unwrap();
        assert_eq!(points.len(), 1950);
        assert_eq!(counts.iter().sum::<u64>(), 2000);
        // The dominant map should dominate even in a short run.
        assert!(counts[1] > 1000);
    }

    #[test]
    fn rasterize_counts_hits_and_scales_logarithmically() {
        let bbox = BoundingBox::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let empty = rasterize(&[], 4, 4, bbox).unwrap();
        assert!(empty.pixels().iter().all(|&p| p == 0));
        assert_eq!(empty.nonzero_fraction(), 0.0);

        let center = [Point2::new(0.5, 0.5)];
        let single = rasterize(&center, 5, 5, bbox).unwrap();
        assert_eq!(single.pixels().iter().filter(|&&p| p > 0).count(), 1);
        // A single hit maps to full intensity.
        assert_eq!(*single.pixels().iter().max().unwrap(), 255);

        // Outside points are ignored; edge points land inside.
        let edge = [
            Point2::new(1.0, 1.0),
            Point2::new(2.0, 0.5),
            Point2::new(0.5, -0.1),
        ];
        let raster = rasterize(&edge, 4, 4, bbox).unwrap();
        assert_eq!(raster.counts().iter().sum::<u64>(), 1);
        // (1,1) is the top-right pixel: row 0, last column.
        assert_eq!(raster.counts()[3], 1);
    }

    #[test]
    fn rasterize_rejects_degenerate_inputs() {
        let bbox = BoundingBox::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(rasterize(&[], 0, 4, bbox).is_err());
        assert!(BoundingBox::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(BoundingBox::new(0.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn pgm_output_has_the_documented_shape() {
        let bbox = BoundingBox::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let raster = rasterize(&[Point2::new(0.1, 0.9)], 3, 2, bbox).unwrap();
        let pgm = to_pgm(&raster);
        let mut lines = pgm.lines();
        assert_eq!(lines.next(), Some("P2"));
        assert_eq!(lines.next(), Some("3 2"));
        assert_eq!(lines.next(), Some("255"));
        // Point near the top-left: first row, first column lights up.
        assert_eq!(lines.next(), Some("255 0 0"));
        assert_eq!(lines.next(), Some("0 0 0"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn csv_output_uses_six_decimals() {
        let csv = points_to_csv(&[Point2::new(1.0, -0.5), Point2::new(2.655602, 9.958506)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines[1], "1.000000,-0.500000");
        assert_eq!(lines[2], "2.655602,9.958506");
    }
}
