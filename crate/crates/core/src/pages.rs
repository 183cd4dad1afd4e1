//! Synthetic flat pages for tests, benchmarks and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::imgio::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextPageOptions {
    pub rows: usize,
    pub cols: usize,
    /// Glyph cell height in pixels.
    pub glyph_height: usize,
    pub stroke: usize,
    /// Join each word with a stroke along its top edge, like a matra.
    pub headline: bool,
}

impl TextPageOptions {
    /// Glyph size scaled to the page; roughly 10–12 pt text on an A4 scan.
    pub fn for_page(rows: usize, cols: usize) -> Self {
        let glyph_height = (rows / 80).clamp(8, 40);
        Self {
            rows,
            cols,
            glyph_height,
            stroke: (glyph_height / 8).max(2),
            headline: false,
        }
    }
}

pub fn text_page(rows: usize, cols: usize, seed: u64) -> BinaryImage {
    text_page_with(&TextPageOptions::for_page(rows, cols), seed)
}

/// Lines of random block glyphs grouped into words, inside an 8% margin.
pub fn text_page_with(opts: &TextPageOptions, seed: u64) -> BinaryImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rows, cols) = (opts.rows, opts.cols);
    let mut img = BinaryImage::new(rows, cols).expect("non-empty page");
    let h = opts.glyph_height;
    let w = (h * 3 / 5).max(3);
    let s = opts.stroke.min(w / 2).max(1);
    let (top, left) = (rows * 8 / 100, cols * 8 / 100);
    let (bottom, right) = (rows - top, cols - left);
    let pitch = h * 2;

    let fill = |img: &mut BinaryImage, r0: usize, r1: usize, c0: usize, c1: usize| {
        for r in r0..r1.min(rows) {
            for c in c0..c1.min(cols) {
                img.set(r, c, true);
            }
        }
    };

    let mut y = top;
    while y + h <= bottom {
        let mut x = left;
        while x + w <= right {
            let word_len = rng.random_range(2..9usize);
            let word_start = x;
            for _ in 0..word_len {
                if x + w > right {
                    break;
                }
                let parts: u8 = rng.random_range(1..32);
                if parts & 1 != 0 || parts & 2 == 0 {
                    fill(&mut img, y, y + h, x, x + s);
                }
                if parts & 2 != 0 {
                    fill(&mut img, y, y + h, x + w - s, x + w);
                }
                if parts & 4 != 0 {
                    fill(&mut img, y, y + s, x, x + w);
                }
                if parts & 8 != 0 {
                    fill(&mut img, y + h / 2, y + h / 2 + s, x, x + w);
                }
                if parts & 16 != 0 {
                    fill(&mut img, y + h - s, y + h, x, x + w);
                }
                x += w + s;
            }
            if opts.headline {
                fill(&mut img, y, y + s, word_start, x.saturating_sub(s));
            }
            x += w;
        }
        y += pitch;
    }
    img
}

/// A page of `count` evenly spaced full-width horizontal rules.
///
/// Returns the image and the top row of each rule.
pub fn ruled_page(
    rows: usize,
    cols: usize,
    count: usize,
    thickness: usize,
    margin: usize,
) -> (BinaryImage, Vec<usize>) {
    let spacing = rows as f64 / (count + 1) as f64;
    let tops: Vec<usize> = (1..=count).map(|k| (k as f64 * spacing).round() as usize).collect();
    let img = BinaryImage::from_fn(rows, cols, |r, c| {
        c >= margin && c + margin < cols && tops.iter().any(|&t| r >= t && r < t + thickness)
    })
    .expect("non-empty page");
    (img, tops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_page_is_deterministic_and_inked() {
        let a = text_page(400, 300, 1);
        assert_eq!(a, text_page(400, 300, 1));
        assert_ne!(a, text_page(400, 300, 2));
        let ink = a.foreground_count() as f64 / (400.0 * 300.0);
        assert!(ink > 0.03 && ink < 0.4, "ink fraction {ink}");
    }

    #[test]
    fn ruled_page_layout() {
        let (img, tops) = ruled_page(130, 50, 12, 3, 5);
        assert_eq!(tops.len(), 12);
        assert_eq!(tops[0], 10);
        assert_eq!(img.foreground_count(), 12 * 3 * 40);
    }
}
