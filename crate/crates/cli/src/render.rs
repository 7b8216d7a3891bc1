//! ASCII and PPM pictures of planar periodic points, and DOT export of strip
//! matrices.
//!
//! Pictures print the top row first: row `y = height - 1` comes out on top,
//! since the vertical axis points up.

use std::fmt::Write as _;

use sft_core::{StripMatrix, TorusConfig};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("unknown format `{0}` (expected ascii or ppm)")]
    UnknownFormat(String),
    #[error("picture size must be at least 1x1, got {0}x{1}")]
    EmptyPicture(usize, usize),
    #[error("only planar points can be drawn, this one has dimension {0}")]
    NotPlanar(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Ppm,
}

impl std::str::FromStr for Format {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "ppm" => Ok(Format::Ppm),
            _ => Err(RenderError::UnknownFormat(s.to_string())),
        }
    }
}

/// One character per symbol: the first character of its name, or when that
/// is taken, the base-36 digit of its index, or else the first free
/// printable character.
pub fn symbol_chars(alphabet: &[String]) -> Vec<char> {
    let mut used = Vec::new();
    for (i, name) in alphabet.iter().enumerate() {
        let first = name.chars().next().filter(|c| !c.is_whitespace());
        let digit = char::from_digit((i % 36) as u32, 36);
        let c = [first, digit]
            .into_iter()
            .flatten()
            .find(|c| !used.contains(c))
            .or_else(|| ('!'..='~').find(|c| !used.contains(c)))
            .unwrap_or('?');
        used.push(c);
    }
    used
}

/// Evenly spaced hues, full value.
pub fn palette(n: usize) -> Vec<[u8; 3]> {
    (0..n)
        .map(|i| {
            let h = i as f64 / n.max(1) as f64 * 6.0;
            let (s, v) = (0.7, 0.95);
            let f = h - h.floor();
            let p = v * (1.0 - s);
            let q = v * (1.0 - s * f);
            let t = v * (1.0 - s * (1.0 - f));
            let (r, g, b) = match h.floor() as usize % 6 {
                0 => (v, t, p),
                1 => (q, v, p),
                2 => (p, v, t),
                3 => (p, q, v),
                4 => (t, p, v),
                _ => (v, p, q),
            };
            [r, g, b].map(|x| (x * 255.0).round() as u8)
        })
        .collect()
}

pub fn render_point(
    torus: &TorusConfig,
    alphabet: &[String],
    width: usize,
    height: usize,
    format: Format,
) -> Result<Vec<u8>, RenderError> {
    if torus.dim() != 2 {
        return Err(RenderError::NotPlanar(torus.dim()));
    }
    if width == 0 || height == 0 {
        return Err(RenderError::EmptyPicture(width, height));
    }
    let rows = (0..height)
        .rev()
        .map(|y| (0..width).map(move |x| torus.at(&[x as i64, y as i64]) as usize));
    match format {
        Format::Ascii => {
            let chars = symbol_chars(alphabet);
            let mut out = String::with_capacity((width + 1) * height);
            for row in rows {
                out.extend(row.map(|s| chars[s]));
                out.push('\n');
            }
            Ok(out.into_bytes())
        }
        Format::Ppm => {
            let colors = palette(alphabet.len());
            let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
            for row in rows {
                for s in row {
                    out.extend_from_slice(&colors[s]);
                }
            }
            Ok(out)
        }
    }
}

/// Directed graph with an edge `b -> a` labelled by the phase for every
/// entry where strip `a` may sit above strip `b`.
pub fn matrix_dot(m: &StripMatrix, labels: &[String]) -> String {
    let mut out = String::from("digraph strips {\n");
    for (i, label) in labels.iter().enumerate() {
        let _ = writeln!(out, "  s{i} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    for b in 0..m.dim() {
        for a in 0..m.dim() {
            if let Some(phi) = m.phase(b, a) {
                let _ = writeln!(out, "  s{b} -> s{a} [label=\"{phi}\"];");
            }
        }
    }
    out.push_str("}\n");
    out
}
