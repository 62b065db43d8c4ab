//! Binary images, the graphs of their black pixels, and the occlusion
//! patterns used in the shape experiments.
//!
//! Pixel centers sit at integer coordinates with `y` growing downwards. The
//! measuring functions are measured from the center of the top-left pixel
//! of the shape's bounding box.

mod pbm;
pub mod synthetic;

use std::f64::consts::FRAC_1_SQRT_2;

pub use pbm::{decode as decode_pbm, encode_p1, load_image};

use crate::error::{Error, Result};
use crate::graph::FilteredGraph;
use crate::mv::Decomposition;
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
}

/// Inclusive pixel bounds of the black pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl BoundingBox {
    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self::from_pixels(width, height, vec![false; width * height])
    }

    /// Row-major pixels, `true` for black.
    pub fn from_pixels(width: usize, height: usize, pixels: Vec<bool>) -> Self {
        assert_eq!(pixels.len(), width * height, "pixel count mismatch");
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::from_pixels(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, black: bool) {
        self.pixels[y * self.width + x] = black;
    }

    pub fn black_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    /// Experiments need at least one black pixel.
    pub fn is_usable(&self) -> bool {
        self.pixels.iter().any(|&p| p)
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        let mut bb: Option<BoundingBox> = None;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    let b = bb.get_or_insert(BoundingBox {
                        x0: x,
                        y0: y,
                        x1: x,
                        y1: y,
                    });
                    b.x0 = b.x0.min(x);
                    b.x1 = b.x1.max(x);
                    b.y1 = y;
                }
            }
        }
        bb
    }

    pub fn to_p1(&self) -> String {
        encode_p1(self)
    }

    /// Pairs of adjacent pixel indices `(p, q)`, `p < q`, both satisfying `keep`.
    fn adjacent_pairs(
        &self,
        adjacency: Adjacency,
        keep: impl Fn(usize) -> bool,
    ) -> Vec<(usize, usize)> {
        let offsets: &[(isize, isize)] = match adjacency {
            Adjacency::Four => &[(1, 0), (0, 1)],
            Adjacency::Eight => &[(1, 0), (0, 1), (1, 1), (-1, 1)],
        };
        let mut pairs = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                let p = y * self.width + x;
                if !keep(p) {
                    continue;
                }
                for &(dx, dy) in offsets {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx < 0 || nx >= self.width as isize || ny >= self.height as isize {
                        continue;
                    }
                    let q = ny as usize * self.width + nx as usize;
                    if keep(q) {
                        pairs.push((p, q));
                    }
                }
            }
        }
        pairs
    }
}

/// Pixel neighbourhood used for foreground connectivity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Adjacency {
    #[default]
    Four,
    Eight,
}

/// One of the eight measuring functions: signed distance from one of four
/// lines through the bounding-box origin, at angles 0, π/4, π/2 and 3π/4.
/// Indices 5..=8 are the negatives of 1..=4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasuringFunction(u8);

impl MeasuringFunction {
    pub const ALL: [MeasuringFunction; 8] = [
        Self(1),
        Self(2),
        Self(3),
        Self(4),
        Self(5),
        Self(6),
        Self(7),
        Self(8),
    ];

    pub fn new(index: u8) -> Result<Self> {
        if (1..=8).contains(&index) {
            Ok(Self(index))
        } else {
            Err(Error::Domain(format!(
                "measuring function index must be 1..=8, got {index}"
            )))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Line angle in radians, measured counter-clockwise on screen.
    pub fn angle(self) -> f64 {
        f64::from((self.0 - 1) % 4) * std::f64::consts::FRAC_PI_4
    }

    /// Value at offset `(dx, dy)` from the origin, `dy` pointing down.
    ///
    /// With screen-up coordinates `(dx, -dy)` and line direction
    /// `(cos θ, sin θ)` the distance is `|dx sin θ + dy cos θ|`; the diagonal
    /// cases use the exact `1/√2` factor so equal offsets give equal values.
    pub fn eval(self, dx: f64, dy: f64) -> f64 {
        let distance = match (self.0 - 1) % 4 {
            0 => dy.abs(),
            1 => (dx + dy).abs() * FRAC_1_SQRT_2,
            2 => dx.abs(),
            _ => (dx - dy).abs() * FRAC_1_SQRT_2,
        };
        if self.0 > 4 {
            -distance
        } else {
            distance
        }
    }
}

/// Black pixels as vertices (id = row-major pixel index), adjacent black
/// pixels as edges, values from `phi` relative to the bounding-box origin.
pub fn pixel_graph(
    img: &BinaryImage,
    phi: MeasuringFunction,
    adjacency: Adjacency,
) -> Result<FilteredGraph> {
    let bb = img
        .bounding_box()
        .ok_or_else(|| Error::UnusableImage("image has no black pixels".into()))?;
    masked_pixel_graph(img, bb, |p| img.pixels[p], phi, adjacency)
}

fn masked_pixel_graph(
    img: &BinaryImage,
    origin: BoundingBox,
    keep: impl Fn(usize) -> bool,
    phi: MeasuringFunction,
    adjacency: Adjacency,
) -> Result<FilteredGraph> {
    let w = img.width;
    let vertices = (0..img.pixels.len()).filter(|&p| keep(p)).map(|p| {
        let dx = (p % w) as f64 - origin.x0 as f64;
        let dy = (p / w) as f64 - origin.y0 as f64;
        (p as u64, phi.eval(dx, dy))
    });
    let edges = img
        .adjacent_pairs(adjacency, &keep)
        .into_iter()
        .map(|(p, q)| (p as u64, q as u64));
    FilteredGraph::new(vertices, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Top,
    Left,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" => Ok(Side::Top),
            "left" => Ok(Side::Left),
            _ => Err(Error::Domain(format!(
                "occlusion side must be top or left, got `{s}`"
            ))),
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Top => "top",
            Side::Left => "left",
        })
    }
}

fn check_fraction(fraction: f64) -> Result<()> {
    if (0.0..=1.0).contains(&fraction) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "occlusion fraction must be in [0, 1], got {fraction}"
        )))
    }
}

/// Pixels of the occluding band: the first `⌈fraction · extent⌉` rows (top)
/// or columns (left) of the bounding box, across its full other extent.
fn band_mask(img: &BinaryImage, bb: BoundingBox, side: Side, fraction: f64) -> Vec<bool> {
    let extent = match side {
        Side::Top => bb.height(),
        Side::Left => bb.width(),
    };
    // absorb representation error, e.g. 0.3 * 10 = 3.0000000000000004
    let depth = ((fraction * extent as f64) - 1e-9).ceil().max(0.0) as usize;
    let mut mask = vec![false; img.pixels.len()];
    for y in bb.y0..=bb.y1 {
        for x in bb.x0..=bb.x1 {
            let inside = match side {
                Side::Top => y < bb.y0 + depth,
                Side::Left => x < bb.x0 + depth,
            };
            mask[y * img.width + x] = inside;
        }
    }
    mask
}

/// A shape united with a visible occluding rectangle.
#[derive(Clone, Debug)]
pub struct VisibleOcclusion {
    /// The union `X = A ∪ B`.
    pub image: BinaryImage,
    /// Original shape pixels.
    pub a: Vec<bool>,
    /// Rectangle pixels, closed up so that every edge of `X` lies in `A` or `B`.
    pub b: Vec<bool>,
    /// Bounding box of the original shape; measuring functions use its origin.
    pub origin: BoundingBox,
    pub adjacency: Adjacency,
}

impl VisibleOcclusion {
    pub fn intersection(&self) -> Vec<bool> {
        self.a.iter().zip(&self.b).map(|(&p, &q)| p && q).collect()
    }

    /// The cover as a [`Decomposition`] of the pixel graph of `X` under `phi`.
    pub fn decomposition(&self, phi: MeasuringFunction) -> Result<Decomposition> {
        let x = masked_pixel_graph(
            &self.image,
            self.origin,
            |p| self.image.pixels[p],
            phi,
            self.adjacency,
        )?;
        let ids = |mask: &[bool]| -> Vec<u64> {
            (0..mask.len())
                .filter(|&p| mask[p])
                .map(|p| p as u64)
                .collect()
        };
        Decomposition::new(x, ids(&self.a), ids(&self.b))
    }
}

/// Unites the shape with a black band over the top rows or left columns of
/// its bounding box.
pub fn occlude_visible(
    img: &BinaryImage,
    side: Side,
    fraction: f64,
    adjacency: Adjacency,
) -> Result<VisibleOcclusion> {
    check_fraction(fraction)?;
    let bb = img
        .bounding_box()
        .ok_or_else(|| Error::UnusableImage("image has no black pixels".into()))?;
    let a = img.pixels.clone();
    let mut b = band_mask(img, bb, side, fraction);
    let union: Vec<bool> = a.iter().zip(&b).map(|(&p, &q)| p || q).collect();
    let image = BinaryImage::from_pixels(img.width, img.height, union);
    // an A-only pixel touching a B-only pixel joins B
    for (p, q) in image.adjacent_pairs(adjacency, |p| image.pixels[p]) {
        let a_only = |i: usize| a[i] && !b[i];
        let b_only = |i: usize| b[i] && !a[i];
        if a_only(p) && b_only(q) {
            b[p] = true;
        } else if a_only(q) && b_only(p) {
            b[q] = true;
        }
    }
    Ok(VisibleOcclusion {
        image,
        a,
        b,
        origin: bb,
        adjacency,
    })
}

/// Erases the band and keeps only the largest remaining component; ties go
/// to the component containing the smallest pixel index. The result has no
/// black pixels when the band swallows the whole shape.
pub fn occlude_invisible(
    img: &BinaryImage,
    side: Side,
    fraction: f64,
    adjacency: Adjacency,
) -> Result<BinaryImage> {
    check_fraction(fraction)?;
    let Some(bb) = img.bounding_box() else {
        return Ok(img.clone());
    };
    let band = band_mask(img, bb, side, fraction);
    let rest: Vec<bool> = img
        .pixels
        .iter()
        .zip(&band)
        .map(|(&p, &q)| p && !q)
        .collect();
    Ok(largest_component(
        &BinaryImage::from_pixels(img.width, img.height, rest),
        adjacency,
    ))
}

/// Keeps the component with most pixels (ties: smallest first pixel index).
pub fn largest_component(img: &BinaryImage, adjacency: Adjacency) -> BinaryImage {
    let n = img.pixels.len();
    let mut uf = UnionFind::new(n);
    for (p, q) in img.adjacent_pairs(adjacency, |p| img.pixels[p]) {
        uf.union(p, q);
    }
    let mut size = vec![0usize; n];
    let mut first = vec![usize::MAX; n];
    for p in (0..n).filter(|&p| img.pixels[p]) {
        let r = uf.find(p);
        size[r] += 1;
        first[r] = first[r].min(p);
    }
    let best = (0..n)
        .filter(|&r| size[r] > 0)
        .max_by(|&r, &s| size[r].cmp(&size[s]).then(first[s].cmp(&first[r])));
    let pixels = match best {
        Some(best) => (0..n)
            .map(|p| img.pixels[p] && uf.find(p) == best)
            .collect(),
        None => vec![false; n],
    };
    BinaryImage::from_pixels(img.width, img.height, pixels)
}
