//! Text and SVG pictures of point sets on the 9×9 board.
//!
//! The board is nine 3×3 blocks. Point `(x1,x2,x3,x4)` sits at row
//! `3·x1 + x3`, column `3·x2 + x4`, so the origin is the upper-left cell.

use std::fmt::Write;

use crate::caps::{completion_counts, find_anchor};
use crate::gf3geom::{from_grid, grid_coords, GeomError, Point, PointSet};
use crate::partitions::CapPartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Annotate {
    #[default]
    None,
    /// Non-members show how many lines they complete; `A` for 10 or more.
    Counts,
}

pub const MEMBER: char = '#';
pub const EMPTY: char = '.';
pub const ANCHOR: char = '*';
pub const BLOCK_GLYPHS: [char; 4] = ['#', 'o', 'x', '+'];
const BLOCK_COLOURS: [&str; 4] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e"];

fn board<F: Fn(Point) -> char>(cell: F) -> String {
    let rule = "+-------+-------+-------+\n";
    let mut out = String::new();
    for row in 0..9 {
        if row % 3 == 0 {
            out.push_str(rule);
        }
        for col in 0..9 {
            if col % 3 == 0 {
                out.push_str(if col == 0 { "| " } else { " | " });
            } else {
                out.push(' ');
            }
            out.push(cell(from_grid(row, col).expect("row and column below 9")));
        }
        out.push_str(" |\n");
    }
    out.push_str(rule);
    out
}

fn count_glyph(n: u8) -> char {
    if n >= 10 {
        'A'
    } else {
        char::from(b'0' + n)
    }
}

/// Members as `#`. A maximal cap's anchor is `*` unless counts are shown.
pub fn ascii_set(s: PointSet, annotate: Annotate) -> String {
    let anchor = find_anchor(s).ok();
    let counts = completion_counts(s);
    board(|p| {
        if s.contains(p) {
            MEMBER
        } else if annotate == Annotate::Counts {
            count_glyph(counts.count(p))
        } else if Some(p) == anchor {
            ANCHOR
        } else {
            EMPTY
        }
    })
}

/// One glyph per block, in block order, and `*` for the anchor.
pub fn ascii_partition(p: &CapPartition) -> String {
    board(|q| {
        p.blocks()
            .iter()
            .position(|b| b.points().contains(q))
            .map_or(ANCHOR, |i| BLOCK_GLYPHS[i])
    })
}

/// Reads back the members (`#` cells) of a board drawn by [`ascii_set`].
pub fn parse_ascii(text: &str) -> Result<PointSet, GeomError> {
    let cells: Vec<char> = text
        .lines()
        .filter(|l| !l.starts_with('+'))
        .flat_map(|l| l.chars().filter(|c| !matches!(c, '|' | ' ')))
        .collect();
    if cells.len() != 81 {
        return Err(GeomError::BadPoint(format!("expected 81 cells, found {}", cells.len())));
    }
    let mut s = PointSet::EMPTY;
    for (k, c) in cells.iter().enumerate() {
        if *c == MEMBER {
            s.insert(from_grid(k / 9, k % 9)?);
        }
    }
    Ok(s)
}

const CELL: usize = 36;
const GAP: usize = 8;
const MARGIN: usize = 10;

fn cell_origin(p: Point) -> (usize, usize) {
    let (row, col) = grid_coords(p);
    (MARGIN + col * CELL + (col / 3) * GAP, MARGIN + row * CELL + (row / 3) * GAP)
}

fn svg_board<F: Fn(Point, &mut String)>(cell: F) -> String {
    let side = 2 * MARGIN + 9 * CELL + 2 * GAP;
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#).unwrap();
    writeln!(out, r##"<rect width="{side}" height="{side}" fill="#ffffff"/>"##).unwrap();
    for p in Point::all() {
        cell(p, &mut out);
    }
    out.push_str("</svg>\n");
    out
}

fn rect(out: &mut String, p: Point, fill: &str) {
    let (x, y) = cell_origin(p);
    let s = CELL - 4;
    writeln!(out, r##"<rect x="{}" y="{}" width="{s}" height="{s}" fill="{fill}" stroke="#555555" stroke-width="1"/>"##, x + 2, y + 2)
        .unwrap();
}

fn label(out: &mut String, p: Point, text: char, colour: &str) {
    let (x, y) = cell_origin(p);
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="16" text-anchor="middle" fill="{colour}">{text}</text>"#,
        x + CELL / 2,
        y + CELL / 2 + 6
    )
    .unwrap();
}

pub fn svg_set(s: PointSet, annotate: Annotate) -> String {
    let anchor = find_anchor(s).ok();
    let counts = completion_counts(s);
    svg_board(|p, out| {
        if s.contains(p) {
            rect(out, p, "#333333");
            return;
        }
        rect(out, p, "#ffffff");
        if annotate == Annotate::Counts {
            label(out, p, count_glyph(counts.count(p)), "#333333");
        } else if Some(p) == anchor {
            label(out, p, ANCHOR, "#333333");
        }
    })
}

pub fn svg_partition(part: &CapPartition) -> String {
    svg_board(|p, out| match part.blocks().iter().position(|b| b.points().contains(p)) {
        Some(i) => rect(out, p, BLOCK_COLOURS[i]),
        None => {
            rect(out, p, "#000000");
            label(out, p, ANCHOR, "#ffffff");
        }
    })
}
