//! Netpbm bitmap (PBM) reading and writing. `1` is black in both the plain
//! (P1) and raw (P4) variants.

use std::path::Path;

use super::BinaryImage;
use crate::error::{Error, Result};

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Pbm {
            offset: self.pos,
            message: message.into(),
        })
    }

    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_blank(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while self
                    .data
                    .get(self.pos)
                    .is_some_and(|&c| c != b'\n' && c != b'\r')
                {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn header_int(&mut self, what: &str) -> Result<usize> {
        self.skip_blank();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return self.err(format!("expected {what}"));
        }
        let text = std::str::from_utf8(&self.data[start..self.pos]).expect("ascii digits");
        match text.parse::<usize>() {
            Ok(0) => {
                self.pos = start;
                self.err(format!("{what} must be positive"))
            }
            Ok(n) => Ok(n),
            Err(_) => {
                self.pos = start;
                self.err(format!("{what} out of range"))
            }
        }
    }
}

pub fn decode(data: &[u8]) -> Result<BinaryImage> {
    let mut cur = Cursor { data, pos: 0 };
    let raw = match data.get(..2) {
        Some(b"P1") => false,
        Some(b"P4") => true,
        _ => return cur.err("not a PBM file (expected P1 or P4 magic)"),
    };
    cur.pos = 2;
    let width = cur.header_int("width")?;
    let height = cur.header_int("height")?;
    let Some(count) = width.checked_mul(height) else {
        return cur.err("image dimensions overflow");
    };
    let mut pixels = Vec::with_capacity(count);
    if raw {
        match data.get(cur.pos) {
            Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
            _ => return cur.err("expected single whitespace before raster"),
        }
        let stride = width.div_ceil(8);
        let needed = stride * height;
        let available = data.len() - cur.pos;
        if available < needed {
            cur.pos = data.len();
            return cur.err(format!(
                "raster truncated: need {needed} bytes, found {available}"
            ));
        }
        for row in data[cur.pos..cur.pos + needed].chunks_exact(stride) {
            for x in 0..width {
                pixels.push(row[x / 8] & (0x80 >> (x % 8)) != 0);
            }
        }
    } else {
        while pixels.len() < count {
            cur.skip_blank();
            match data.get(cur.pos) {
                Some(b'0') => pixels.push(false),
                Some(b'1') => pixels.push(true),
                Some(_) => return cur.err("invalid raster character (expected 0 or 1)"),
                None => {
                    return cur.err(format!(
                        "raster truncated: {} of {count} pixels",
                        pixels.len()
                    ))
                }
            }
            cur.pos += 1;
        }
    }
    Ok(BinaryImage::from_pixels(width, height, pixels))
}

/// Plain PBM with one raster row per line.
pub fn encode_p1(img: &BinaryImage) -> String {
    let mut out = format!("P1\n{} {}\n", img.width(), img.height());
    for y in 0..img.height() {
        let row: Vec<&str> = (0..img.width())
            .map(|x| if img.get(x, y) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_image(path: impl AsRef<Path>) -> Result<BinaryImage> {
    let path = path.as_ref();
    let data = std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode(&data)
}
