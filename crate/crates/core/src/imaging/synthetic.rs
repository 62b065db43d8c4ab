//! Ten filled silhouettes used as a small stand-in shape corpus.
//!
//! Each shape is rasterized from a predicate on pixel centers with a
//! two-pixel white margin. Sizes differ so that no two bounding boxes agree.

use super::BinaryImage;

const MARGIN: usize = 2;

fn raster(w: usize, h: usize, inside: impl Fn(f64, f64) -> bool) -> BinaryImage {
    BinaryImage::from_fn(w + 2 * MARGIN, h + 2 * MARGIN, |x, y| {
        x >= MARGIN
            && y >= MARGIN
            && x < w + MARGIN
            && y < h + MARGIN
            && inside((x - MARGIN) as f64, (y - MARGIN) as f64)
    })
}

/// Even-odd point-in-polygon test.
fn in_polygon(poly: &[(f64, f64)], x: f64, y: f64) -> bool {
    let mut inside = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[j];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn rect(x: f64, y: f64, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
    x >= x0 && x <= x1 && y >= y0 && y <= y1
}

fn disk(x: f64, y: f64, cx: f64, cy: f64, r: f64) -> bool {
    (x - cx).powi(2) + (y - cy).powi(2) <= r * r
}

fn cross() -> BinaryImage {
    raster(31, 31, |x, y| {
        rect(x, y, 11.0, 0.0, 19.0, 30.0) || rect(x, y, 0.0, 11.0, 30.0, 19.0)
    })
}

fn ell() -> BinaryImage {
    raster(24, 36, |x, y| {
        rect(x, y, 0.0, 0.0, 7.0, 35.0) || rect(x, y, 0.0, 28.0, 23.0, 35.0)
    })
}

fn tee() -> BinaryImage {
    raster(37, 30, |x, y| {
        rect(x, y, 0.0, 0.0, 36.0, 7.0) || rect(x, y, 13.0, 0.0, 23.0, 29.0)
    })
}

fn cup() -> BinaryImage {
    raster(32, 27, |x, y| {
        rect(x, y, 0.0, 0.0, 6.0, 26.0)
            || rect(x, y, 25.0, 0.0, 31.0, 26.0)
            || rect(x, y, 0.0, 20.0, 31.0, 26.0)
    })
}

fn star() -> BinaryImage {
    let (cx, cy) = (20.0, 19.5);
    let poly: Vec<(f64, f64)> = (0..10)
        .map(|k| {
            let r = if k % 2 == 0 { 20.0 } else { 8.5 };
            let t = -std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI / 5.0;
            (cx + r * t.cos(), cy + r * t.sin())
        })
        .collect();
    raster(41, 39, move |x, y| in_polygon(&poly, x, y))
}

fn crescent() -> BinaryImage {
    raster(30, 37, |x, y| {
        disk(x, y, 18.0, 18.0, 18.0) && !disk(x, y, 26.0, 14.0, 14.0)
    })
}

fn aitch() -> BinaryImage {
    raster(29, 34, |x, y| {
        rect(x, y, 0.0, 0.0, 7.0, 33.0)
            || rect(x, y, 21.0, 0.0, 28.0, 33.0)
            || rect(x, y, 0.0, 14.0, 28.0, 20.0)
    })
}

fn comb() -> BinaryImage {
    raster(43, 26, |x, y| {
        rect(x, y, 0.0, 0.0, 42.0, 6.0)
            || rect(x, y, 0.0, 0.0, 6.0, 25.0)
            || rect(x, y, 18.0, 0.0, 24.0, 17.0)
            || rect(x, y, 36.0, 0.0, 42.0, 21.0)
    })
}

fn dumbbell() -> BinaryImage {
    raster(46, 20, |x, y| {
        disk(x, y, 9.5, 9.5, 9.5) || disk(x, y, 37.0, 10.0, 8.0) || rect(x, y, 9.0, 7.0, 37.0, 12.0)
    })
}

fn arrow() -> BinaryImage {
    let poly = [
        (0.0, 10.0),
        (24.0, 10.0),
        (24.0, 0.0),
        (39.0, 16.0),
        (24.0, 32.0),
        (24.0, 22.0),
        (0.0, 22.0),
    ];
    raster(40, 33, move |x, y| in_polygon(&poly, x + 0.01, y + 0.01))
}

/// The corpus as `(class name, image)` pairs, one shape per class.
pub fn corpus() -> Vec<(&'static str, BinaryImage)> {
    vec![
        ("cross", cross()),
        ("ell", ell()),
        ("tee", tee()),
        ("cup", cup()),
        ("star", star()),
        ("crescent", crescent()),
        ("aitch", aitch()),
        ("comb", comb()),
        ("dumbbell", dumbbell()),
        ("arrow", arrow()),
    ]
}
