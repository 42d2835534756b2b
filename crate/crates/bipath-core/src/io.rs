//! Text formats for modules, embeddings, bifiltrations and paths, plus the
//! canonical JSON emitters used by the CLI.
//!
//! All formats are line-based. Matrices are written as one line per row;
//! rows of width zero are omitted (the shape is already determined by the
//! DIMS line). Parse errors carry 1-based line numbers. Writers emit a
//! canonical form, byte-stable for equal inputs.

use std::fmt::Write as _;

use thiserror::Error;

use crate::bipath::{ArcCode, BipathInterval, BipathModule, BipathPoset};
use crate::distance::{MatchingResult, OrbitBlock, XRat};
use crate::fibered::{BipathEmbedding, GridModule, MonotonePath};
use crate::field::{FieldSpec, Matrix};
use crate::zigzag::{EdgeDir, ZigzagRep, ZigzagShape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            msg: msg.into(),
        }
    }
}

/// Non-blank lines with their 1-based numbers.
struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        let last = self.items.last().map_or(0, |(n, _)| *n);
        self.next().ok_or_else(|| {
            ParseError::new(last + 1, format!("expected {what}, found end of input"))
        })
    }

    fn finished(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some((n, l)) => Err(ParseError::new(n, format!("trailing content: {l}"))),
        }
    }
}

fn parse_nums<T: std::str::FromStr>(
    line: &str,
    lineno: usize,
    what: &str,
) -> Result<Vec<T>, ParseError> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| ParseError::new(lineno, format!("bad {what}: {t}")))
        })
        .collect()
}

fn parse_field(p: u32, lineno: usize) -> Result<FieldSpec, ParseError> {
    FieldSpec::new(p).map_err(|e| ParseError::new(lineno, e.to_string()))
}

fn read_matrix(
    lines: &mut Lines<'_>,
    rows: usize,
    cols: usize,
    field: FieldSpec,
) -> Result<Matrix, ParseError> {
    let mut m = Matrix::zeros(rows, cols);
    if cols == 0 || rows == 0 {
        return Ok(m);
    }
    for r in 0..rows {
        let (n, line) = lines.expect("matrix row")?;
        let vals: Vec<u32> = parse_nums(line, n, "matrix entry")?;
        if vals.len() != cols {
            return Err(ParseError::new(
                n,
                format!("expected {cols} entries, got {}", vals.len()),
            ));
        }
        for (c, &v) in vals.iter().enumerate() {
            if v >= field.modulus() {
                return Err(ParseError::new(
                    n,
                    format!("entry {v} not reduced mod {}", field.modulus()),
                ));
            }
            m.set(r, c, v);
        }
    }
    Ok(m)
}

fn write_matrix(out: &mut String, m: &Matrix) {
    if m.cols() == 0 {
        return;
    }
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn read_map_header(
    lines: &mut Lines<'_>,
    expect_src: usize,
    expect_dst: usize,
) -> Result<(), ParseError> {
    let (n, line) = lines.expect("MAP header")?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "MAP" {
        return Err(ParseError::new(
            n,
            format!("expected `MAP {expect_src} {expect_dst}`"),
        ));
    }
    let src: usize = toks[1]
        .parse()
        .map_err(|_| ParseError::new(n, "bad MAP source"))?;
    let dst: usize = toks[2]
        .parse()
        .map_err(|_| ParseError::new(n, "bad MAP target"))?;
    if (src, dst) != (expect_src, expect_dst) {
        return Err(ParseError::new(
            n,
            format!("expected `MAP {expect_src} {expect_dst}`, got `MAP {src} {dst}`"),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// ZIGZAG format
// ---------------------------------------------------------------------------

pub fn parse_zigzag(text: &str) -> Result<ZigzagRep, ParseError> {
    let mut lines = Lines::new(text);
    let (n, header) = lines.expect("ZIGZAG header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "ZIGZAG" {
        return Err(ParseError::new(n, "expected `ZIGZAG <L> <p>`"));
    }
    let len: usize = toks[1]
        .parse()
        .map_err(|_| ParseError::new(n, "bad length"))?;
    let p: u32 = toks[2]
        .parse()
        .map_err(|_| ParseError::new(n, "bad modulus"))?;
    if len == 0 {
        return Err(ParseError::new(n, "length must be positive"));
    }
    let field = parse_field(p, n)?;

    let (dn, dline) = lines.expect("DIMS line")?;
    let dtoks: Vec<&str> = dline.split_whitespace().collect();
    if dtoks.first() != Some(&"DIMS") {
        return Err(ParseError::new(dn, "expected `DIMS ...`"));
    }
    let dims: Vec<usize> = parse_nums(&dline[4..], dn, "dimension")?;
    if dims.len() != len {
        return Err(ParseError::new(
            dn,
            format!("expected {len} dims, got {}", dims.len()),
        ));
    }

    // edge orientations come from the MAP headers
    let mut dirs = Vec::with_capacity(len.saturating_sub(1));
    let mut maps = Vec::with_capacity(len.saturating_sub(1));
    for e in 0..len - 1 {
        let (n, line) = lines.expect("MAP header")?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "MAP" {
            return Err(ParseError::new(n, "expected `MAP <src> <dst>`"));
        }
        let src: usize = toks[1]
            .parse()
            .map_err(|_| ParseError::new(n, "bad MAP source"))?;
        let dst: usize = toks[2]
            .parse()
            .map_err(|_| ParseError::new(n, "bad MAP target"))?;
        let dir = if (src, dst) == (e, e + 1) {
            EdgeDir::Forward
        } else if (src, dst) == (e + 1, e) {
            EdgeDir::Backward
        } else {
            return Err(ParseError::new(
                n,
                format!("edge {e} must connect vertices {e} and {}", e + 1),
            ));
        };
        dirs.push(dir);
        maps.push(read_matrix(&mut lines, dims[dst], dims[src], field)?);
    }
    lines.finished()?;
    let shape = ZigzagShape::new(len, dirs).map_err(|e| ParseError::new(n, e.to_string()))?;
    let rep = ZigzagRep {
        shape,
        field,
        dims,
        maps,
    };
    debug_assert!(rep.validate().is_ok(), "shapes are forced by the format");
    Ok(rep)
}

pub fn write_zigzag(rep: &ZigzagRep) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ZIGZAG {} {}", rep.shape.len(), rep.field.modulus());
    let dims: Vec<String> = rep.dims.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "DIMS {}", dims.join(" "));
    for e in 0..rep.shape.edge_count() {
        let _ = writeln!(out, "MAP {} {}", rep.shape.source(e), rep.shape.target(e));
        write_matrix(&mut out, &rep.maps[e]);
    }
    out
}

// ---------------------------------------------------------------------------
// BIPATH format
// ---------------------------------------------------------------------------

pub fn parse_bipath(text: &str) -> Result<BipathModule, ParseError> {
    let mut lines = Lines::new(text);
    let (n, header) = lines.expect("BIPATH header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "BIPATH" {
        return Err(ParseError::new(n, "expected `BIPATH <n> <m> <p>`"));
    }
    let pn: usize = toks[1].parse().map_err(|_| ParseError::new(n, "bad n"))?;
    let pm: usize = toks[2].parse().map_err(|_| ParseError::new(n, "bad m"))?;
    let p: u32 = toks[3]
        .parse()
        .map_err(|_| ParseError::new(n, "bad modulus"))?;
    let poset = BipathPoset::new(pn, pm).map_err(|e| ParseError::new(n, e.to_string()))?;
    let field = parse_field(p, n)?;

    let (dn, dline) = lines.expect("DIMS line")?;
    if !dline.starts_with("DIMS") {
        return Err(ParseError::new(dn, "expected `DIMS ...`"));
    }
    let dims: Vec<usize> = parse_nums(&dline[4..], dn, "dimension")?;
    if dims.len() != poset.vertex_count() {
        return Err(ParseError::new(
            dn,
            format!("expected {} dims, got {}", poset.vertex_count(), dims.len()),
        ));
    }

    let mut arrows = Vec::new();
    for (src, dst) in poset.arrows() {
        read_map_header(&mut lines, src, dst)?;
        arrows.push(read_matrix(&mut lines, dims[dst], dims[src], field)?);
    }
    lines.finished()?;
    // shapes are forced by the format; semantic checks (commutativity) are
    // the caller's `validate`
    Ok(BipathModule {
        poset,
        field,
        dims,
        arrows,
    })
}

pub fn write_bipath(module: &BipathModule) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "BIPATH {} {} {}",
        module.poset.n(),
        module.poset.m(),
        module.field.modulus()
    );
    let dims: Vec<String> = module.dims.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "DIMS {}", dims.join(" "));
    for (k, (src, dst)) in module.poset.arrows().into_iter().enumerate() {
        let _ = writeln!(out, "MAP {src} {dst}");
        write_matrix(&mut out, &module.arrows[k]);
    }
    out
}

// ---------------------------------------------------------------------------
// GRID format
// ---------------------------------------------------------------------------

pub fn parse_grid(text: &str) -> Result<GridModule, ParseError> {
    let mut lines = Lines::new(text);
    let (n, header) = lines.expect("GRID header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "GRID" {
        return Err(ParseError::new(n, "expected `GRID <rows> <cols> <p>`"));
    }
    let rows: usize = toks[1]
        .parse()
        .map_err(|_| ParseError::new(n, "bad rows"))?;
    let cols: usize = toks[2]
        .parse()
        .map_err(|_| ParseError::new(n, "bad cols"))?;
    let p: u32 = toks[3]
        .parse()
        .map_err(|_| ParseError::new(n, "bad modulus"))?;
    if rows == 0 || cols == 0 {
        return Err(ParseError::new(n, "grid must be non-empty"));
    }
    let field = parse_field(p, n)?;

    let (dn, dline) = lines.expect("DIMS line")?;
    if !dline.starts_with("DIMS") {
        return Err(ParseError::new(dn, "expected `DIMS ...`"));
    }
    let dims: Vec<usize> = parse_nums(&dline[4..], dn, "dimension")?;
    if dims.len() != rows * cols {
        return Err(ParseError::new(
            dn,
            format!("expected {} dims", rows * cols),
        ));
    }

    let mut hmaps = Vec::new();
    for r in 0..rows {
        for c in 0..cols - 1 {
            let (hn, hline) = lines.expect("HMAP header")?;
            if hline != format!("HMAP {r} {c}") {
                return Err(ParseError::new(
                    hn,
                    format!("expected `HMAP {r} {c}`, got `{hline}`"),
                ));
            }
            hmaps.push(read_matrix(
                &mut lines,
                dims[r * cols + c + 1],
                dims[r * cols + c],
                field,
            )?);
        }
    }
    let mut vmaps = Vec::new();
    for r in 0..rows - 1 {
        for c in 0..cols {
            let (vn, vline) = lines.expect("VMAP header")?;
            if vline != format!("VMAP {r} {c}") {
                return Err(ParseError::new(
                    vn,
                    format!("expected `VMAP {r} {c}`, got `{vline}`"),
                ));
            }
            vmaps.push(read_matrix(
                &mut lines,
                dims[(r + 1) * cols + c],
                dims[r * cols + c],
                field,
            )?);
        }
    }
    lines.finished()?;
    GridModule::new(rows, cols, field, dims, hmaps, vmaps)
        .map_err(|e| ParseError::new(n, e.to_string()))
}

pub fn write_grid(module: &GridModule) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "GRID {} {} {}",
        module.rows,
        module.cols,
        module.field.modulus()
    );
    let dims: Vec<String> = module.dims().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "DIMS {}", dims.join(" "));
    for r in 0..module.rows {
        for c in 0..module.cols - 1 {
            let _ = writeln!(out, "HMAP {r} {c}");
            write_matrix(&mut out, module.hmap(r, c));
        }
    }
    for r in 0..module.rows - 1 {
        for c in 0..module.cols {
            let _ = writeln!(out, "VMAP {r} {c}");
            write_matrix(&mut out, module.vmap(r, c));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// EMBED / BIFILT / PATH formats
// ---------------------------------------------------------------------------

/// One or more `EMBED <n> <m>` blocks, each followed by `v r c` lines in
/// bipath label order.
pub fn parse_embeddings(text: &str) -> Result<Vec<BipathEmbedding>, ParseError> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while let Some((n, header)) = lines.next() {
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "EMBED" {
            return Err(ParseError::new(n, "expected `EMBED <n> <m>`"));
        }
        let pn: usize = toks[1].parse().map_err(|_| ParseError::new(n, "bad n"))?;
        let pm: usize = toks[2].parse().map_err(|_| ParseError::new(n, "bad m"))?;
        let poset = BipathPoset::new(pn, pm).map_err(|e| ParseError::new(n, e.to_string()))?;
        let mut targets = vec![(0usize, 0usize); poset.vertex_count()];
        for expect_v in 0..poset.vertex_count() {
            let (ln, line) = lines.expect("embedding line `v r c`")?;
            let vals: Vec<usize> = parse_nums(line, ln, "embedding coordinate")?;
            if vals.len() != 3 || vals[0] != expect_v {
                return Err(ParseError::new(
                    ln,
                    format!("expected `{expect_v} <r> <c>`"),
                ));
            }
            targets[expect_v] = (vals[1], vals[2]);
        }
        out.push(
            BipathEmbedding::new(poset, targets).map_err(|e| ParseError::new(n, e.to_string()))?,
        );
    }
    if out.is_empty() {
        return Err(ParseError::new(1, "no EMBED block found"));
    }
    Ok(out)
}

pub struct Bifiltration {
    pub rows: usize,
    pub cols: usize,
    pub vertex_grades: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize, (usize, usize))>,
}

/// `BIFILT <rows> <cols>` followed by `V id r c` and `E id1 id2 r c` lines.
/// Vertex ids must be 0..count in order of their `V` lines.
pub fn parse_bifiltration(text: &str) -> Result<Bifiltration, ParseError> {
    let mut lines = Lines::new(text);
    let (n, header) = lines.expect("BIFILT header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "BIFILT" {
        return Err(ParseError::new(n, "expected `BIFILT <rows> <cols>`"));
    }
    let rows: usize = toks[1]
        .parse()
        .map_err(|_| ParseError::new(n, "bad rows"))?;
    let cols: usize = toks[2]
        .parse()
        .map_err(|_| ParseError::new(n, "bad cols"))?;
    let mut vertex_grades = Vec::new();
    let mut edges = Vec::new();
    while let Some((ln, line)) = lines.next() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            Some(&"V") => {
                let vals: Vec<usize> = parse_nums(&line[1..], ln, "vertex line")?;
                if vals.len() != 3 || vals[0] != vertex_grades.len() {
                    return Err(ParseError::new(
                        ln,
                        format!("expected `V {} <r> <c>`", vertex_grades.len()),
                    ));
                }
                vertex_grades.push((vals[1], vals[2]));
            }
            Some(&"E") => {
                let vals: Vec<usize> = parse_nums(&line[1..], ln, "edge line")?;
                if vals.len() != 4 {
                    return Err(ParseError::new(ln, "expected `E <id1> <id2> <r> <c>`"));
                }
                edges.push((vals[0], vals[1], (vals[2], vals[3])));
            }
            _ => return Err(ParseError::new(ln, "expected a `V` or `E` line")),
        }
    }
    Ok(Bifiltration {
        rows,
        cols,
        vertex_grades,
        edges,
    })
}

/// One or more `PATH` blocks of `r c` lines.
pub fn parse_paths(text: &str) -> Result<Vec<MonotonePath>, ParseError> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    let mut current: Option<(usize, Vec<(usize, usize)>)> = None;
    let flush = |cur: &mut Option<(usize, Vec<(usize, usize)>)>,
                 out: &mut Vec<MonotonePath>|
     -> Result<(), ParseError> {
        if let Some((n, pts)) = cur.take() {
            out.push(MonotonePath::new(pts).map_err(|e| ParseError::new(n, e.to_string()))?);
        }
        Ok(())
    };
    while let Some((ln, line)) = lines.next() {
        if line == "PATH" {
            flush(&mut current, &mut out)?;
            current = Some((ln, Vec::new()));
        } else {
            let Some((_, pts)) = current.as_mut() else {
                return Err(ParseError::new(ln, "point before any PATH header"));
            };
            let vals: Vec<usize> = parse_nums(line, ln, "path point")?;
            if vals.len() != 2 {
                return Err(ParseError::new(ln, "expected `r c`"));
            }
            pts.push((vals[0], vals[1]));
        }
    }
    flush(&mut current, &mut out)?;
    if out.is_empty() {
        return Err(ParseError::new(1, "no PATH block found"));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Output: arc codes and distances, text and canonical JSON.
// ---------------------------------------------------------------------------

pub fn arc_code_to_text(ac: &ArcCode) -> String {
    if ac.is_empty() {
        return "(empty)\n".into();
    }
    let mut out = String::new();
    for (iv, mult) in ac.iter() {
        let _ = writeln!(out, "{iv} x{mult}");
    }
    out
}

fn json_opt(v: Option<usize>) -> String {
    v.map_or("null".into(), |x| x.to_string())
}

/// Canonical JSON: entries in arc-code order (full, left, right, top,
/// bottom; then by labels), fixed key order.
pub fn arc_code_to_json(ac: &ArcCode) -> String {
    let mut parts = Vec::new();
    for (iv, mult) in ac.iter() {
        let (i, j) = match iv {
            BipathInterval::Full => (None, None),
            _ => {
                let (i, j) = iv.labels().expect("labelled interval");
                (Some(i), Some(j))
            }
        };
        parts.push(format!(
            "{{\"kind\":\"{}\",\"i\":{},\"j\":{},\"mult\":{}}}",
            iv.kind_label(),
            json_opt(i),
            json_opt(j),
            mult
        ));
    }
    format!("[{}]", parts.join(","))
}

fn orbit_to_json(o: &OrbitBlock) -> String {
    format!(
        "{{\"kind\":\"{}\",\"lo\":\"{}\",\"hi\":\"{}\",\"periodic\":{}}}",
        o.rep.kind.label(),
        o.rep.lo,
        o.rep.hi,
        o.periodic
    )
}

/// Distance report with the realizing matching as a flat entry array,
/// canonical key order. Indices refer to the orbit lists, which follow the
/// canonical arc-code order with multiplicities expanded.
pub fn distance_to_json(
    d: &XRat,
    matching: &MatchingResult,
    orbits_a: &[OrbitBlock],
    orbits_b: &[OrbitBlock],
) -> String {
    let mut entries: Vec<String> = matching
        .pairs
        .iter()
        .map(|(i, j, z)| format!("{{\"type\":\"pair\",\"a\":{i},\"b\":{j},\"shift\":{z}}}"))
        .collect();
    entries.extend(
        matching
            .deleted_a
            .iter()
            .map(|i| format!("{{\"type\":\"delete_a\",\"a\":{i}}}")),
    );
    entries.extend(
        matching
            .deleted_b
            .iter()
            .map(|j| format!("{{\"type\":\"delete_b\",\"b\":{j}}}")),
    );
    let oa: Vec<String> = orbits_a.iter().map(orbit_to_json).collect();
    let ob: Vec<String> = orbits_b.iter().map(orbit_to_json).collect();
    format!(
        "{{\"d_B\":\"{d}\",\"orbits_a\":[{}],\"orbits_b\":[{}],\"matching\":[{}]}}",
        oa.join(","),
        ob.join(","),
        entries.join(",")
    )
}
