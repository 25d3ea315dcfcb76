//! Space-time diagram rendering.

use alloc::vec::Vec;

use crate::error::Error;
use crate::sim::Trace;
use crate::Result;

/// Glyphs for ASCII rendering, indexed by letter.
const GLYPHS: &[u8] = b".#23456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    /// Binary PGM (P5), maxval 255, letters scaled by `255 / (q - 1)`.
    Pgm,
}

/// Render a trace as an image byte stream, one image row per trace row.
/// An empty trace renders to an empty stream.
pub fn render_spacetime(trace: &Trace, alphabet_size: usize, format: RenderFormat) -> Result<Vec<u8>> {
    if trace.width == 0 || trace.rows.is_empty() {
        return Ok(Vec::new());
    }
    match format {
        RenderFormat::Ascii => {
            if alphabet_size > GLYPHS.len() {
                return Err(Error::UnsupportedAlphabet { size: alphabet_size, max: GLYPHS.len() });
            }
            let mut out = Vec::with_capacity(trace.rows.len() * (trace.width + 1));
            for row in &trace.rows {
                out.extend(row.iter().map(|&l| GLYPHS[l as usize]));
                out.push(b'\n');
            }
            Ok(out)
        }
        RenderFormat::Pgm => {
            if alphabet_size > 256 {
                return Err(Error::UnsupportedAlphabet { size: alphabet_size, max: 256 });
            }
            let mut out = Vec::new();
            out.extend_from_slice(b"P5\n");
            push_decimal(&mut out, trace.width as u64);
            out.push(b' ');
            push_decimal(&mut out, trace.rows.len() as u64);
            out.extend_from_slice(b"\n255\n");
            let denom = alphabet_size.saturating_sub(1).max(1) as u32;
            for row in &trace.rows {
                out.extend(row.iter().map(|&l| ((l as u32 * 255 + denom / 2) / denom) as u8));
            }
            Ok(out)
        }
    }
}

fn push_decimal(out: &mut Vec<u8>, mut value: u64) {
    let mut digits = [0u8; 20];
    let mut i = digits.len();
    loop {
        i -= 1;
        digits[i] = b'0' + (value % 10) as u8;
        value /= 10;
        if value == 0 {
            break;
        }
    }
    out.extend_from_slice(&digits[i..]);
}
