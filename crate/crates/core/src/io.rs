//! File formats.
//!
//! * Points: CSV with header `x0,x1,...`, one point per row.
//! * Graph hyperplanes: CSV with header `a0,...,a{n-2},c`.
//! * Finite-field sets: CSV of coordinate tuples, header `x0,x1,...`.
//! * Grid sets: CSV with header `level,i0,i1,...`, one cell per row, or a
//!   binary run-length encoding of the sorted cell keys (see [`write_grid_rle`]).
//! * Reports: pretty JSON with struct field order preserved.

use std::io::{Read, Write};

use serde::Serialize;

use crate::dimension::GridSet;
use crate::duality::GraphHyperplane;
use crate::finitefield::FFSet;
use crate::{LabError, Result};

fn header(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn read_rows<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let head: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != head.len() {
            return Err(LabError::mismatch(head.len(), rec.len()));
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok((head, rows))
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| LabError::param(format!("cannot parse CSV field {s:?}")))
}

pub fn write_points_csv<W: Write>(points: &[Vec<f64>], out: W) -> Result<()> {
    let n = points.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header("x", n))?;
    for p in points {
        if p.len() != n {
            return Err(LabError::mismatch(n, p.len()));
        }
        w.write_record(p.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points_csv<R: Read>(input: R) -> Result<Vec<Vec<f64>>> {
    let (_, rows) = read_rows(input)?;
    rows.iter().map(|r| r.iter().map(|s| parse(s)).collect()).collect()
}

pub fn write_hyperplanes_csv<W: Write>(planes: &[GraphHyperplane], out: W) -> Result<()> {
    let n = planes.first().map_or(1, GraphHyperplane::n);
    let mut w = csv::Writer::from_writer(out);
    let mut head = header("a", n - 1);
    head.push("c".into());
    w.write_record(&head)?;
    for p in planes {
        if p.n() != n {
            return Err(LabError::mismatch(n, p.n()));
        }
        w.write_record(p.a.iter().chain(std::iter::once(&p.c)).map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_hyperplanes_csv<R: Read>(input: R) -> Result<Vec<GraphHyperplane>> {
    let (head, rows) = read_rows(input)?;
    if head.last().map(String::as_str) != Some("c") {
        return Err(LabError::param("hyperplane CSV must end with a `c` column"));
    }
    rows.iter()
        .map(|r| {
            let vals: Vec<f64> = r.iter().map(|s| parse(s)).collect::<Result<_>>()?;
            let (c, a) = vals.split_last().expect("header has a c column");
            Ok(GraphHyperplane::new(a.to_vec(), *c))
        })
        .collect()
}

pub fn write_ffset_csv<W: Write>(set: &FFSet, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header("x", set.n))?;
    for p in set.points() {
        w.write_record(p.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ffset_csv<R: Read>(q: u32, input: R) -> Result<FFSet> {
    let (head, rows) = read_rows(input)?;
    let pts: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|s| parse(s)).collect())
        .collect::<Result<_>>()?;
    FFSet::new(q, head.len(), &pts)
}

pub fn write_grid_csv<W: Write>(g: &GridSet, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut head = vec!["level".to_string()];
    head.extend(header("i", g.n()));
    w.write_record(&head)?;
    let level = g.level().to_string();
    for cell in g.cells() {
        w.write_record(std::iter::once(level.clone()).chain(cell.iter().map(|c| c.to_string())))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid_csv<R: Read>(input: R) -> Result<GridSet> {
    let (head, rows) = read_rows(input)?;
    if head.first().map(String::as_str) != Some("level") {
        return Err(LabError::param("grid CSV must start with a `level` column"));
    }
    let n = head.len() - 1;
    let Some(first) = rows.first() else {
        return Err(LabError::param("grid CSV has no rows, so its level is unknown"));
    };
    let level: u32 = parse(&first[0])?;
    let mut cells = Vec::with_capacity(rows.len());
    for r in &rows {
        if parse::<u32>(&r[0])? != level {
            return Err(LabError::param("grid CSV mixes levels"));
        }
        cells.push(r[1..].iter().map(|s| parse(s)).collect::<Result<Vec<u32>>>()?);
    }
    GridSet::from_cells(n, level, cells)
}

const RLE_MAGIC: &[u8; 4] = b"SLGS";
const RLE_VERSION: u8 = 1;

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8 & 0x7f) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

fn get_varint(data: &[u8], pos: &mut usize) -> Result<u64> {
    let mut v = 0u64;
    for shift in (0..64).step_by(7) {
        let b = *data
            .get(*pos)
            .ok_or_else(|| LabError::param("truncated grid run-length data"))?;
        *pos += 1;
        v |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
    }
    Err(LabError::param("varint overflow in grid run-length data"))
}

/// Binary layout: magic `SLGS`, version byte, `n` byte, `level` byte, then
/// a varint run count followed by `(gap, length)` varint pairs. Runs cover
/// consecutive Morton keys; `gap` is the distance from the end of the
/// previous run (or from 0) to the start of this one.
pub fn write_grid_rle<W: Write>(g: &GridSet, mut out: W) -> Result<()> {
    let mut runs: Vec<(u64, u64)> = Vec::new();
    for &k in g.keys() {
        match runs.last_mut() {
            Some((start, len)) if *start + *len == k => *len += 1,
            _ => runs.push((k, 1)),
        }
    }
    let mut buf = Vec::with_capacity(16 + runs.len() * 4);
    buf.extend_from_slice(RLE_MAGIC);
    buf.push(RLE_VERSION);
    buf.push(g.n() as u8);
    buf.push(g.level() as u8);
    put_varint(&mut buf, runs.len() as u64);
    let mut prev_end = 0u64;
    for (start, len) in runs {
        put_varint(&mut buf, start - prev_end);
        put_varint(&mut buf, len);
        prev_end = start + len;
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_grid_rle<R: Read>(mut input: R) -> Result<GridSet> {
    let mut data = Vec::new();
    input.read_to_end(&mut data)?;
    if data.len() < 7 || &data[..4] != RLE_MAGIC {
        return Err(LabError::param("not a grid run-length file"));
    }
    if data[4] != RLE_VERSION {
        return Err(LabError::param(format!("unsupported grid format version {}", data[4])));
    }
    let n = data[5] as usize;
    let level = u32::from(data[6]);
    let mut pos = 7;
    let runs = get_varint(&data, &mut pos)?;
    let mut keys = Vec::new();
    let mut prev_end = 0u64;
    for _ in 0..runs {
        let start = prev_end + get_varint(&data, &mut pos)?;
        let len = get_varint(&data, &mut pos)?;
        if keys.len() as u64 + len > crate::dimension::MAX_CELLS as u64 {
            return Err(LabError::param("grid file exceeds the 2^24 cell cap"));
        }
        keys.extend(start..start + len);
        prev_end = start + len;
    }
    GridSet::from_morton_keys(n, level, keys)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<W: Write, T: Serialize>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}
