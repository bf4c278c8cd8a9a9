//! Diverging-colormap heatmaps written as PNG.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use crate::error::{Error, Result};
use crate::phase_space::RealField;

use super::font::{draw_text, text_width, GLYPH_H};

const MARGIN_LEFT: usize = 70;
const MARGIN_BOTTOM: usize = 40;
const MARGIN_TOP: usize = 30;
const MARGIN_RIGHT: usize = 20;
// odd, so the grid center falls on a pixel
const TARGET_PIXELS: usize = 481;

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    /// Overlay the zero level set in black.
    pub zero_contours: bool,
    /// Draw a unit-area reference square in the lower-left corner.
    pub area_square: bool,
    /// Text above the plot.
    pub title: Option<String>,
}

/// An RGB raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl Image {
    fn new(width: usize, height: usize) -> Self {
        Self { width, height, rgb: vec![255; width * height * 3] }
    }

    fn set(&mut self, x: usize, y: usize, c: [u8; 3]) {
        if x < self.width && y < self.height {
            let i = 3 * (y * self.width + x);
            self.rgb[i..i + 3].copy_from_slice(&c);
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let w = BufWriter::new(File::create(path)?);
        let mut enc = png::Encoder::new(w, self.width as u32, self.height as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let png_err = |e: png::EncodingError| Error::Io(std::io::Error::other(e));
        let mut writer = enc.write_header().map_err(png_err)?;
        writer.write_image_data(&self.rgb).map_err(png_err)?;
        writer.finish().map_err(png_err)?;
        Ok(())
    }
}

/// Blue for negative, white at zero, red for positive; `s ∈ [−1, 1]`.
pub fn diverging(s: f64) -> [u8; 3] {
    let s = s.clamp(-1.0, 1.0);
    let (lo, hi) = if s >= 0.0 { ([255.0, 255.0, 255.0], [178.0, 24.0, 43.0]) } else { ([255.0, 255.0, 255.0], [33.0, 102.0, 172.0]) };
    let a = s.abs();
    let mix = |k: usize| (lo[k] + (hi[k] - lo[k]) * a).round() as u8;
    [mix(0), mix(1), mix(2)]
}

/// Compact number formatting for labels.
fn label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-2..1e4).contains(&a) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Bilinear sample of the field at fractional node coordinates.
fn sample(f: &RealField, fq: f64, fp: f64) -> f64 {
    let g = f.grid();
    let iq = (fq.floor() as usize).min(g.n_q - 2);
    let ip = (fp.floor() as usize).min(g.n_p - 2);
    let (tq, tp) = (fq - iq as f64, fp - ip as f64);
    let v00 = f.at(ip, iq);
    let v01 = f.at(ip, iq + 1);
    let v10 = f.at(ip + 1, iq);
    let v11 = f.at(ip + 1, iq + 1);
    (1.0 - tp) * ((1.0 - tq) * v00 + tq * v01) + tp * ((1.0 - tq) * v10 + tq * v11)
}

/// Render `field` with a colour scale symmetric about zero.
pub fn render_heatmap(field: &RealField, opts: &RenderOptions) -> Image {
    let g = *field.grid();
    let pw = TARGET_PIXELS;
    let aspect = (g.p_max - g.p_min) / (g.q_max - g.q_min);
    let ph = (pw as f64 * aspect).round().clamp(16.0, 4.0 * pw as f64) as usize;
    let mut img = Image::new(MARGIN_LEFT + pw + MARGIN_RIGHT, MARGIN_TOP + ph + MARGIN_BOTTOM);
    let vmax = field.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let norm = if vmax > 0.0 { vmax } else { 1.0 };

    let mut values = vec![0.0; pw * ph];
    for y in 0..ph {
        // field rows run from p_max down, like image rows
        let fp = y as f64 / (ph - 1) as f64 * (g.n_p - 1) as f64;
        for x in 0..pw {
            let fq = x as f64 / (pw - 1) as f64 * (g.n_q - 1) as f64;
            values[y * pw + x] = sample(field, fq, fp);
        }
    }
    for y in 0..ph {
        for x in 0..pw {
            img.set(MARGIN_LEFT + x, MARGIN_TOP + y, diverging(values[y * pw + x] / norm));
        }
    }
    if opts.zero_contours {
        for y in 0..ph {
            for x in 0..pw {
                let v = values[y * pw + x];
                let right = if x + 1 < pw { values[y * pw + x + 1] } else { v };
                let down = if y + 1 < ph { values[(y + 1) * pw + x] } else { v };
                if (v < 0.0) != (right < 0.0) || (v < 0.0) != (down < 0.0) {
                    img.set(MARGIN_LEFT + x, MARGIN_TOP + y, [0, 0, 0]);
                }
            }
        }
    }
    if opts.area_square {
        let px_per_q = (pw - 1) as f64 / (g.q_max - g.q_min);
        let px_per_p = (ph - 1) as f64 / (g.p_max - g.p_min);
        let (sw, sh) = (px_per_q.round() as usize, px_per_p.round() as usize);
        let (x0, y1) = (MARGIN_LEFT + 6, MARGIN_TOP + ph - 6);
        for y in y1.saturating_sub(sh)..y1 {
            for x in x0..(x0 + sw).min(MARGIN_LEFT + pw) {
                img.set(x, y, [128, 128, 128]);
            }
        }
    }

    // frame and annotations
    let black = [0, 0, 0];
    for x in MARGIN_LEFT - 1..=MARGIN_LEFT + pw {
        img.set(x, MARGIN_TOP - 1, black);
        img.set(x, MARGIN_TOP + ph, black);
    }
    for y in MARGIN_TOP - 1..=MARGIN_TOP + ph {
        img.set(MARGIN_LEFT - 1, y, black);
        img.set(MARGIN_LEFT + pw, y, black);
    }
    let mut text = |s: &str, x: usize, y: usize| draw_text(s, x, y, 1, |px, py| img.set(px, py, black));
    let below = MARGIN_TOP + ph + 6;
    text(&label(g.q_min), MARGIN_LEFT, below);
    let qmax = label(g.q_max);
    text(&qmax, MARGIN_LEFT + pw - text_width(&qmax, 1), below);
    text("q", MARGIN_LEFT + pw / 2, below);
    let pmax = label(g.p_max);
    text(&pmax, MARGIN_LEFT - 6 - text_width(&pmax, 1), MARGIN_TOP);
    let pmin = label(g.p_min);
    text(&pmin, MARGIN_LEFT - 6 - text_width(&pmin, 1), MARGIN_TOP + ph - GLYPH_H);
    text("p", MARGIN_LEFT - 14, MARGIN_TOP + ph / 2);
    let range = format!("+-{}", label(vmax));
    text(&range, MARGIN_LEFT + pw - text_width(&range, 1), below + GLYPH_H + 6);
    if let Some(title) = &opts.title {
        text(title, MARGIN_LEFT, (MARGIN_TOP - GLYPH_H) / 2);
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::Grid2D;

    #[test]
    fn colormap_is_symmetric_and_white_at_zero() {
        assert_eq!(diverging(0.0), [255, 255, 255]);
        let (r, b) = (diverging(1.0), diverging(-1.0));
        assert!(r[0] > r[2] && b[2] > b[0]);
        assert_eq!(diverging(3.0), diverging(1.0));
    }

    #[test]
    fn vacuum_blob_is_radially_symmetric() {
        let g = Grid2D::square(4.0, 65).unwrap();
        let f = RealField::from_fn(g, |z| (-z.norm_sqr()).exp()).unwrap();
        let img = render_heatmap(&f, &RenderOptions::default());
        let (cx, cy) = (MARGIN_LEFT + (img.width - MARGIN_LEFT - MARGIN_RIGHT) / 2, MARGIN_TOP + (img.height - MARGIN_TOP - MARGIN_BOTTOM) / 2);
        let centre = img.pixel(cx, cy);
        assert!(centre[0] > 150 && centre[2] < 60, "{centre:?}");
        for d in [20usize, 60] {
            let px = [img.pixel(cx + d, cy), img.pixel(cx - d, cy), img.pixel(cx, cy + d), img.pixel(cx, cy - d)];
            for p in &px[1..] {
                for k in 0..3 {
                    assert!((p[k] as i32 - px[0][k] as i32).abs() <= 2);
                }
            }
        }
    }

    #[test]
    fn negative_core_is_blue_with_contour() {
        // displaced Fock n = 1 at its centre is negative
        let g = Grid2D::square(4.0, 65).unwrap();
        let f = RealField::from_fn(g, |z| (2.0 * z.norm_sqr() - 1.0) * (-z.norm_sqr()).exp()).unwrap();
        let img = render_heatmap(&f, &RenderOptions { zero_contours: true, area_square: true, title: Some("t=0".into()) });
        let (cx, cy) = (MARGIN_LEFT + (img.width - MARGIN_LEFT - MARGIN_RIGHT) / 2, MARGIN_TOP + (img.height - MARGIN_TOP - MARGIN_BOTTOM) / 2);
        let c = img.pixel(cx, cy);
        assert!(c[2] > c[0], "{c:?}");
        let black = (0..img.width).filter(|&x| img.pixel(x, cy) == [0, 0, 0]).count();
        assert!(black >= 4);
    }

    #[test]
    fn momentum_points_up() {
        let g = Grid2D::new(-1.0, 1.0, -2.0, 2.0, 9, 9).unwrap();
        let f = RealField::from_fn(g, |z| z.p).unwrap();
        let img = render_heatmap(&f, &RenderOptions::default());
        let x = MARGIN_LEFT + 100;
        let (top, bottom) = (img.pixel(x, MARGIN_TOP + 2), img.pixel(x, img.height - MARGIN_BOTTOM - 3));
        assert!(top[0] > top[2] && bottom[2] > bottom[0], "{top:?} {bottom:?}");
    }

    #[test]
    fn writes_png() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid2D::square(1.0, 5).unwrap();
        let f = RealField::from_fn(g, |z| z.q).unwrap();
        let path = dir.path().join("x.png");
        render_heatmap(&f, &RenderOptions::default()).write_png(&path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[1..4], b"PNG");
    }
}
