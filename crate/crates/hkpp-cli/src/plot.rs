//! Minimal static line plots: white canvas, black axes, one polyline per
//! series. No text, no timestamps — output bytes depend only on the data.

use image::{Rgb, RgbImage};
use std::path::Path;

use crate::CliError;

const W: u32 = 800;
const H: u32 = 600;
const MARGIN: u32 = 50;

pub struct Series<'a> {
    pub points: &'a [(f64, f64)],
    pub color: [u8; 3],
}

pub fn line_plot(path: &Path, series: &[Series<'_>]) -> Result<(), CliError> {
    let mut img = RgbImage::from_pixel(W, H, Rgb([255, 255, 255]));

    let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in s.points {
            if x.is_finite() && y.is_finite() {
                xmin = xmin.min(x);
                xmax = xmax.max(x);
                ymin = ymin.min(y);
                ymax = ymax.max(y);
            }
        }
    }
    if !(xmax > xmin) {
        xmax = xmin + 1.0;
    }
    if !(ymax > ymin) {
        ymax = ymin + 1.0;
    }

    let to_px = |x: f64, y: f64| -> (i64, i64) {
        let px = MARGIN as f64
            + (x - xmin) / (xmax - xmin) * (W - 2 * MARGIN) as f64;
        let py = (H - MARGIN) as f64
            - (y - ymin) / (ymax - ymin) * (H - 2 * MARGIN) as f64;
        (px.round() as i64, py.round() as i64)
    };

    // axes along the data bounding box
    for x in MARGIN..=(W - MARGIN) {
        img.put_pixel(x, H - MARGIN, Rgb([0, 0, 0]));
    }
    for y in MARGIN..=(H - MARGIN) {
        img.put_pixel(MARGIN, y, Rgb([0, 0, 0]));
    }

    for s in series {
        let color = Rgb(s.color);
        for pair in s.points.windows(2) {
            let (x0, y0) = to_px(pair[0].0, pair[0].1);
            let (x1, y1) = to_px(pair[1].0, pair[1].1);
            draw_segment(&mut img, x0, y0, x1, y1, color);
        }
    }

    img.save(path)
        .map_err(|e| CliError::validation(format!("cannot write plot {}: {e}", path.display())))
}

/// Bresenham segment, clipped to the canvas.
fn draw_segment(img: &mut RgbImage, mut x0: i64, mut y0: i64, x1: i64, y1: i64, color: Rgb<u8>) {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if (0..W as i64).contains(&x0) && (0..H as i64).contains(&y0) {
            img.put_pixel(x0 as u32, y0 as u32, color);
        }
        if x0 == x1 && y0 == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x0 += sx;
        }
        if e2 <= dx {
            err += dx;
            y0 += sy;
        }
    }
}
