//! Gridplots: one horizontal strip of colored bands per prime-index order,
//! written as binary PPM.

use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::daleth::{finite_difference, quantize256, sign_filter, DalethSpec, Filter, Series, SeriesSpec};
use crate::error::{Error, Result};
use crate::pip::{pip_levels, LevelRequest};
use crate::sieve::PrimeEngine;

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const RED: Rgb = [255, 0, 0];
pub const BLACK: Rgb = [0, 0, 0];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colormap {
    #[default]
    Sign3,
    Jet256,
}

impl Colormap {
    pub fn color(self, level: i64) -> Result<Rgb> {
        match self {
            Colormap::Sign3 => colormap_sign(level),
            Colormap::Jet256 => colormap_jet(level),
        }
    }

    /// Every palette entry, in level order.
    pub fn table(self) -> Vec<Rgb> {
        match self {
            Colormap::Sign3 => vec![BLACK, RED, WHITE],
            Colormap::Jet256 => (0..256).map(|l| colormap_jet(l).expect("in range")).collect(),
        }
    }

    /// Filter that turns a raw `ℸ` series into levels for this map.
    pub fn filter(self) -> Filter {
        match self {
            Colormap::Sign3 => Filter::Sign,
            Colormap::Jet256 => Filter::Quant256,
        }
    }
}

/// White for +1, red for 0, black for -1.
pub fn colormap_sign(v: i64) -> Result<Rgb> {
    match v {
        1 => Ok(WHITE),
        0 => Ok(RED),
        -1 => Ok(BLACK),
        _ => Err(Error::InvalidArgument(format!("sign level {v} not in {{-1, 0, 1}}"))),
    }
}

/// Piecewise-linear jet: blue at 0 through green to red at 255.
pub fn colormap_jet(level: i64) -> Result<Rgb> {
    if !(0..=255).contains(&level) {
        return Err(Error::InvalidArgument(format!("jet level {level} not in 0..=255")));
    }
    let t = level as f64 / 255.0;
    let ch = |c: f64| ((1.5 - (4.0 * t - c).abs()).clamp(0.0, 1.0) * 255.0).round() as u8;
    Ok([ch(3.0), ch(2.0), ch(1.0)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub band_width: u32,
    pub row_height: u32,
    pub gap: u32,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            band_width: 1,
            row_height: 40,
            gap: 8,
        }
    }
}

/// Input row: levels for one order plus the PIP values at its ends.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub k: u32,
    pub levels: Vec<i64>,
    pub q_range: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowMeta {
    pub k: u32,
    pub q_first: Option<u64>,
    pub q_last: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridImage {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB, top row first.
    pub pixels: Vec<u8>,
    /// One entry per strip, top to bottom.
    pub meta: Vec<RowMeta>,
}

impl GridImage {
    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let o = 3 * (y as usize * self.width as usize + x as usize);
        [self.pixels[o], self.pixels[o + 1], self.pixels[o + 2]]
    }
}

/// Stack rows with the highest `k` on top, white gaps between strips.
pub fn render_gridplot(rows: &[GridRow], style: Colormap, geometry: Geometry) -> Result<GridImage> {
    let Geometry {
        band_width,
        row_height,
        gap,
    } = geometry;
    if band_width == 0 || row_height == 0 {
        return Err(Error::InvalidArgument("band width and row height must be positive".into()));
    }
    let Some(first) = rows.first() else {
        return Err(Error::InvalidArgument("no rows to render".into()));
    };
    let len = first.levels.len();
    if len == 0 {
        return Err(Error::InvalidArgument("rows are empty".into()));
    }
    if let Some(bad) = rows.iter().find(|r| r.levels.len() != len) {
        return Err(Error::InvalidArgument(format!(
            "row k={} has {} levels, expected {len}",
            bad.k,
            bad.levels.len()
        )));
    }
    let width = u32::try_from(len as u64 * band_width as u64).map_err(|_| Error::Overflow("image width"))?;
    let nrows = rows.len() as u64;
    let height = u32::try_from(nrows * (row_height as u64 + gap as u64) - gap as u64)
        .map_err(|_| Error::Overflow("image height"))?;

    let mut order: Vec<&GridRow> = rows.iter().collect();
    order.sort_by(|a, b| b.k.cmp(&a.k));

    let stride = 3 * width as usize;
    let mut pixels = Vec::with_capacity(stride * height as usize);
    let gap_line = vec![255u8; stride];
    for (r, row) in order.iter().enumerate() {
        if r > 0 {
            for _ in 0..gap {
                pixels.extend_from_slice(&gap_line);
            }
        }
        let mut line = Vec::with_capacity(stride);
        for &level in &row.levels {
            let c = style.color(level)?;
            for _ in 0..band_width {
                line.extend_from_slice(&c);
            }
        }
        for _ in 0..row_height {
            pixels.extend_from_slice(&line);
        }
    }
    let meta = order
        .iter()
        .map(|r| RowMeta {
            k: r.k,
            q_first: r.q_range.map(|q| q.0),
            q_last: r.q_range.map(|q| q.1),
        })
        .collect();
    Ok(GridImage {
        width,
        height,
        pixels,
        meta,
    })
}

/// Rows for orders `k_lo..=k_hi` of `ℸ` over `i_lo..=i_hi`, filtered for
/// `style`. `base` supplies `h`, `n` and `s`. One sieve pass per level.
pub fn gridplot_rows(
    engine: &PrimeEngine,
    base: DalethSpec,
    k_lo: u32,
    k_hi: u32,
    i_lo: u64,
    i_hi: u64,
    style: Colormap,
) -> Result<Vec<GridRow>> {
    if k_lo > k_hi {
        return Err(Error::InvalidArgument(format!("order range {k_lo}:{k_hi} is empty")));
    }
    base.validate()?;
    let hi = i_hi.checked_add(base.reach()).ok_or(Error::Overflow("index range"))?;
    let levels = pip_levels(
        engine,
        &[LevelRequest {
            s: base.s,
            max_k: k_hi,
            i_lo,
            i_hi: hi,
        }],
    )?
    .pop()
    .expect("one request");
    let count = (i_hi - i_lo) as usize;
    (k_lo..=k_hi)
        .map(|k| {
            let pips = &levels[k as usize];
            let signed: Vec<i64> = pips
                .iter()
                .map(|&v| i64::try_from(v).map_err(|_| Error::Overflow("PIP value")))
                .collect::<Result<_>>()?;
            let raw = Series {
                spec: SeriesSpec::Daleth(DalethSpec { k, ..base }),
                filter: Filter::None,
                start: i_lo,
                values: finite_difference(&signed, base.n, base.h)?,
            };
            let filtered = match style {
                Colormap::Sign3 => sign_filter(&raw),
                Colormap::Jet256 => quantize256(&raw)?,
            };
            Ok(GridRow {
                k,
                levels: filtered.values,
                q_range: Some((pips[0], pips[count])),
            })
        })
        .collect()
}

pub fn encode_ppm(image: &GridImage, mut w: impl Write) -> Result<()> {
    write!(w, "P6\n{} {}\n255\n", image.width, image.height)?;
    w.write_all(&image.pixels)?;
    w.flush()?;
    Ok(())
}

pub fn write_ppm(image: &GridImage, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    encode_ppm(image, BufWriter::new(file))
}

/// Parse the binary PPM layout written by [`encode_ppm`] (comments are not
/// supported). The result carries no row metadata.
pub fn decode_ppm(mut r: impl Read) -> Result<GridImage> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let bad = |what: &str| Error::InvalidArgument(format!("malformed PPM: {what}"));
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header"))?);
    }
    if fields[0] != "P6" || fields[3] != "255" {
        return Err(bad("expected P6 with maxval 255"));
    }
    let width: u32 = fields[1].parse().map_err(|_| bad("width"))?;
    let height: u32 = fields[2].parse().map_err(|_| bad("height"))?;
    // exactly one whitespace byte ends the header
    pos += 1;
    let need = 3 * width as usize * height as usize;
    if bytes.len() < pos || bytes.len() - pos != need {
        return Err(bad("pixel data length"));
    }
    Ok(GridImage {
        width,
        height,
        pixels: bytes[pos..].to_vec(),
        meta: Vec::new(),
    })
}

pub fn read_ppm(path: &Path) -> Result<GridImage> {
    decode_ppm(std::fs::File::open(path)?)
}
