//! Occlusion experiments on a labelled corpus of binary shapes.
//!
//! Every shape is described by the cornerpoint sets of its eight
//! measuring functions. The fingerprint protocol unites each shape with a
//! visible band and counts how many of its cornerpoints reappear in each
//! original; the recognition protocol erases a band, keeps the largest
//! remaining piece and classifies it by the nearest original under the
//! summed Hausdorff distance.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt_real;
use crate::imaging::{
    load_image, occlude_invisible, occlude_visible, pixel_graph, Adjacency, BinaryImage,
    MeasuringFunction, Side,
};
use crate::sizefn::{common_cornerpoints, cornerpoints, hausdorff_distance, CornerpointSet};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub class: String,
    pub class_index: usize,
    pub path: PathBuf,
    pub image: BinaryImage,
}

/// Reads a manifest of `<class> <path>` lines; relative paths are resolved
/// against the manifest's directory. Class indices follow first appearance.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut classes: Vec<String> = Vec::new();
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(class), Some(file), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "expected `<class> <path>`".into(),
            });
        };
        let class_index = match classes.iter().position(|c| c == class) {
            Some(i) => i,
            None => {
                classes.push(class.to_string());
                classes.len() - 1
            }
        };
        let image_path = base.join(file);
        let image = load_image(&image_path)?;
        entries.push(CorpusEntry {
            class: class.to_string(),
            class_index,
            path: image_path,
            image,
        });
    }
    if entries.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: format!("manifest {} lists no images", path.display()),
        });
    }
    Ok(entries)
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub occlusions: Vec<(Side, f64)>,
    /// Matching tolerance relative to the magnitude of the compared values.
    pub tol: f64,
    pub adjacency: Adjacency,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let occlusions = [Side::Top, Side::Left]
            .into_iter()
            .flat_map(|s| [0.2, 0.3, 0.4, 0.6].map(|f| (s, f)))
            .collect();
        Self {
            occlusions,
            tol: 1e-9,
            adjacency: Adjacency::Four,
        }
    }
}

/// Cornerpoint sets of the eight measuring functions, in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Descriptor(pub Vec<CornerpointSet>);

pub fn describe(img: &BinaryImage, adjacency: Adjacency) -> Result<Descriptor> {
    MeasuringFunction::ALL
        .iter()
        .map(|&phi| pixel_graph(img, phi, adjacency).map(|g| cornerpoints(&g)))
        .collect::<Result<Vec<_>>>()
        .map(Descriptor)
}

fn describe_all(images: &[&BinaryImage], adjacency: Adjacency) -> Vec<Result<Descriptor>> {
    images
        .par_iter()
        .map(|img| describe(img, adjacency))
        .collect()
}

fn absolute_tol(rel: f64, a: &CornerpointSet, b: &CornerpointSet) -> f64 {
    let scale = a
        .iter()
        .chain(b.iter())
        .flat_map(|c| [c.u, c.v])
        .filter(|x| x.is_finite())
        .fold(1.0, |m: f64, x| m.max(x.abs()));
    rel * scale
}

/// Percentage of the cornerpoints of `occluded` found in `original`: matched
/// counts summed over the eight functions, over the summed support sizes.
pub fn common_percentage(occluded: &Descriptor, original: &Descriptor, tol: f64) -> Result<f64> {
    let mut matched = 0;
    let mut total = 0;
    for (a, b) in occluded.0.iter().zip(&original.0) {
        matched += common_cornerpoints(a, b, absolute_tol(tol, a, b))?.count;
        total += a.support_len();
    }
    Ok(if total == 0 {
        100.0
    } else {
        100.0 * matched as f64 / total as f64
    })
}

/// Sum over the eight functions of the Hausdorff distances.
pub fn descriptor_distance(a: &Descriptor, b: &Descriptor) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .map(|(p, q)| hausdorff_distance(p, q))
        .sum()
}

#[derive(Clone, Debug)]
pub struct FingerprintMatrix {
    pub side: Side,
    pub fraction: f64,
    pub names: Vec<String>,
    /// `matrix[i][j]`: percentage of occluded shape `i` found in original `j`.
    pub matrix: Vec<Vec<f64>>,
    /// Shapes whose occluded version could not be described, skipped.
    pub skipped: Vec<usize>,
}

impl FingerprintMatrix {
    fn rows(&self) -> impl Iterator<Item = (usize, &Vec<f64>)> {
        self.matrix
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.skipped.contains(i))
    }

    /// Rows whose diagonal entry is the row maximum (ties allowed).
    pub fn diagonal_max_rows(&self) -> usize {
        self.rows()
            .filter(|(i, row)| row.iter().all(|&x| x <= row[*i]))
            .count()
    }

    /// Rows where another entry equals the diagonal maximum.
    pub fn tied_rows(&self) -> Vec<usize> {
        self.rows()
            .filter(|(i, row)| {
                row.iter().all(|&x| x <= row[*i])
                    && row
                        .iter()
                        .enumerate()
                        .any(|(j, &x)| j != *i && x == row[*i])
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Fraction of evaluated rows whose maximum is on the diagonal.
    pub fn dominance(&self) -> f64 {
        let rows = self.rows().count();
        if rows == 0 {
            0.0
        } else {
            self.diagonal_max_rows() as f64 / rows as f64
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("occluded\\original");
        for name in &self.names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, row) in self.matrix.iter().enumerate() {
            out.push_str(&self.names[i]);
            for &x in row {
                out.push(',');
                if !self.skipped.contains(&i) {
                    out.push_str(&fmt_real(x));
                }
            }
            out.push('\n');
        }
        let tied: Vec<&str> = self
            .tied_rows()
            .iter()
            .map(|&i| self.names[i].as_str())
            .collect();
        let _ = writeln!(
            out,
            "# dominance={} diagonal_max_rows={} tied_rows={}",
            fmt_real(self.dominance()),
            self.diagonal_max_rows(),
            tied.join(";")
        );
        out
    }
}

/// Visible-occlusion fingerprinting for every configured occlusion.
pub fn fingerprint(
    corpus: &[CorpusEntry],
    config: &ExperimentConfig,
) -> Result<Vec<FingerprintMatrix>> {
    let images: Vec<&BinaryImage> = corpus.iter().map(|e| &e.image).collect();
    let originals = describe_all(&images, config.adjacency)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = corpus.iter().map(|e| e.class.clone()).collect();
    config
        .occlusions
        .iter()
        .map(|&(side, fraction)| {
            let occluded: Vec<BinaryImage> = corpus
                .iter()
                .map(|e| {
                    occlude_visible(&e.image, side, fraction, config.adjacency).map(|o| o.image)
                })
                .collect::<Result<_>>()?;
            let refs: Vec<&BinaryImage> = occluded.iter().collect();
            let described = describe_all(&refs, config.adjacency);
            let mut matrix = Vec::with_capacity(corpus.len());
            let mut skipped = Vec::new();
            for (i, d) in described.into_iter().enumerate() {
                match d {
                    Ok(d) => matrix.push(
                        originals
                            .iter()
                            .map(|o| common_percentage(&d, o, config.tol))
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    Err(_) => {
                        skipped.push(i);
                        matrix.push(vec![0.0; corpus.len()]);
                    }
                }
            }
            Ok(FingerprintMatrix {
                side,
                fraction,
                names: names.clone(),
                matrix,
                skipped,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecognitionResult {
    pub side: Side,
    pub fraction: f64,
    pub correct: usize,
    /// Shapes that survived occlusion and were classified.
    pub evaluated: usize,
    /// Shapes erased entirely by the occlusion.
    pub excluded: usize,
    /// Queries whose nearest distance was attained by more than one class.
    pub ties: usize,
    /// Predicted class index per shape, `None` when excluded.
    pub predictions: Vec<Option<usize>>,
}

impl RecognitionResult {
    pub fn rate(&self) -> f64 {
        if self.evaluated == 0 {
            0.0
        } else {
            self.correct as f64 / self.evaluated as f64
        }
    }
}

pub fn recognition_csv(results: &[RecognitionResult]) -> String {
    let mut out = String::from("side,fraction,rate,correct,evaluated,excluded,ties\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.side,
            fmt_real(r.fraction),
            fmt_real(r.rate()),
            r.correct,
            r.evaluated,
            r.excluded,
            r.ties
        );
    }
    out
}

/// Nearest original by summed Hausdorff distance. Infinite distances rank
/// last and tie with each other; ties go to the smallest class index.
fn nearest(query: &Descriptor, originals: &[Descriptor], classes: &[usize]) -> (usize, bool) {
    let dists: Vec<f64> = originals
        .iter()
        .map(|o| descriptor_distance(query, o))
        .collect();
    let best = dists.iter().copied().fold(f64::INFINITY, f64::min);
    let tied: Vec<usize> = (0..dists.len())
        .filter(|&k| dists[k] == best)
        .map(|k| classes[k])
        .collect();
    let class = *tied.iter().min().expect("corpus is nonempty");
    let distinct = tied.iter().any(|&c| c != class);
    (class, distinct)
}

/// Invisible-occlusion recognition for every configured occlusion.
pub fn recognize(
    corpus: &[CorpusEntry],
    config: &ExperimentConfig,
) -> Result<Vec<RecognitionResult>> {
    let images: Vec<&BinaryImage> = corpus.iter().map(|e| &e.image).collect();
    let originals = describe_all(&images, config.adjacency)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let classes: Vec<usize> = corpus.iter().map(|e| e.class_index).collect();
    config
        .occlusions
        .iter()
        .map(|&(side, fraction)| {
            let occluded: Vec<BinaryImage> = corpus
                .iter()
                .map(|e| occlude_invisible(&e.image, side, fraction, config.adjacency))
                .collect::<Result<_>>()?;
            let usable: Vec<&BinaryImage> = occluded.iter().filter(|o| o.is_usable()).collect();
            let mut described = describe_all(&usable, config.adjacency).into_iter();
            let mut result = RecognitionResult {
                side,
                fraction,
                correct: 0,
                evaluated: 0,
                excluded: 0,
                ties: 0,
                predictions: Vec::with_capacity(corpus.len()),
            };
            for (i, occ) in occluded.iter().enumerate() {
                if !occ.is_usable() {
                    result.excluded += 1;
                    result.predictions.push(None);
                    continue;
                }
                let query = described.next().expect("one descriptor per usable image")?;
                let (class, tie) = nearest(&query, &originals, &classes);
                result.evaluated += 1;
                result.ties += usize::from(tie);
                result.correct += usize::from(class == classes[i]);
                result.predictions.push(Some(class));
            }
            Ok(result)
        })
        .collect()
}
