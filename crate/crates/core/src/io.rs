//! Signal file formats.
//!
//! QSIG binary (little-endian): magic `QSIG`, u32 version = 1, u32 n1, u32 n2,
//! f64 x1_min, f64 dx1, f64 x2_min, f64 dx2, then n1*n2*4 f64 values,
//! row-major axis-1 major with components interleaved (q0, q1, q2, q3).
//! Round-trips are lossless.
//!
//! CSV: header `x1,x2,q0,q1,q2,q3`, one row per sample in the same order,
//! every float printed with 17 significant digits so the text round-trip is
//! exact as well. Frequency-domain signals reuse both formats; the header
//! fields then carry the frequency lattice.

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::quat::Quaternion;
use crate::signal::QSignal2D;
use std::io::{Read, Write};
use std::path::Path;

const QSIG_MAGIC: [u8; 4] = *b"QSIG";
const QSIG_VERSION: u32 = 1;

pub fn write_qsig<W: Write>(f: &QSignal2D, mut w: W) -> Result<()> {
    let g = f.grid();
    w.write_all(&QSIG_MAGIC)?;
    w.write_all(&QSIG_VERSION.to_le_bytes())?;
    w.write_all(&(g.n1() as u32).to_le_bytes())?;
    w.write_all(&(g.n2() as u32).to_le_bytes())?;
    for v in [g.x1_min(), g.dx1(), g.x2_min(), g.dx2()] {
        w.write_all(&v.to_le_bytes())?;
    }
    for q in f.samples() {
        for c in [q.q0, q.q1, q.q2, q.q3] {
            w.write_all(&c.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_qsig<R: Read>(mut r: R) -> Result<QSignal2D> {
    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic, "magic")?;
    if magic != QSIG_MAGIC {
        return Err(Error::BadMagic { expected: QSIG_MAGIC, found: magic });
    }
    let version = read_u32(&mut r, "version")?;
    if version != QSIG_VERSION {
        return Err(Error::BadVersion(version));
    }
    let n1 = read_u32(&mut r, "n1")? as usize;
    let n2 = read_u32(&mut r, "n2")? as usize;
    let x1_min = read_f64(&mut r, "x1_min")?;
    let dx1 = read_f64(&mut r, "dx1")?;
    let x2_min = read_f64(&mut r, "x2_min")?;
    let dx2 = read_f64(&mut r, "dx2")?;
    let grid = Grid2D::new(n1, n2, x1_min, x2_min, dx1, dx2)?;
    let mut samples = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let q0 = read_f64(&mut r, "sample")?;
        let q1 = read_f64(&mut r, "sample")?;
        let q2 = read_f64(&mut r, "sample")?;
        let q3 = read_f64(&mut r, "sample")?;
        let q = Quaternion::new(q0, q1, q2, q3);
        if !q.is_finite() {
            return Err(Error::NonFinite(k));
        }
        samples.push(q);
    }
    QSignal2D::from_samples(grid, samples)
}

pub fn write_qsig_file<P: AsRef<Path>>(f: &QSignal2D, path: P) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_qsig(f, std::io::BufWriter::new(file))
}

pub fn read_qsig_file<P: AsRef<Path>>(path: P) -> Result<QSignal2D> {
    let file = std::fs::File::open(path)?;
    read_qsig(std::io::BufReader::new(file))
}

/// 17 significant digits: enough to reproduce any f64 exactly.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(f: &QSignal2D, mut w: W) -> Result<()> {
    writeln!(w, "x1,x2,q0,q1,q2,q3")?;
    let g = f.grid();
    for k1 in 0..g.n1() {
        for k2 in 0..g.n2() {
            let q = f.value(k1, k2);
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt17(g.coord1(k1)),
                fmt17(g.coord2(k2)),
                fmt17(q.q0),
                fmt17(q.q1),
                fmt17(q.q2),
                fmt17(q.q3)
            )?;
        }
    }
    Ok(())
}

pub fn read_csv<R: Read>(mut r: R) -> Result<QSignal2D> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "x1,x2,q0,q1,q2,q3" => {}
        Some(h) => return Err(Error::Parse(format!("unexpected CSV header {h:?}"))),
        None => return Err(Error::Truncated("empty CSV".into())),
    }
    let mut coords = Vec::new();
    let mut samples = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!("line {}: expected 6 fields", ln + 2)));
        }
        let mut vals = [0.0f64; 6];
        for (i, s) in fields.iter().enumerate() {
            vals[i] = s
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", ln + 2)))?;
        }
        coords.push((vals[0], vals[1]));
        let q = Quaternion::new(vals[2], vals[3], vals[4], vals[5]);
        if !q.is_finite() {
            return Err(Error::NonFinite(samples.len()));
        }
        samples.push(q);
    }
    let grid = infer_grid(&coords)?;
    QSignal2D::from_samples(grid, samples)
}

pub fn write_csv_file<P: AsRef<Path>>(f: &QSignal2D, path: P) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(f, std::io::BufWriter::new(file))
}

pub fn read_csv_file<P: AsRef<Path>>(path: P) -> Result<QSignal2D> {
    let file = std::fs::File::open(path)?;
    read_csv(std::io::BufReader::new(file))
}

/// Reconstruct the lattice from row-major (x1, x2) coordinate columns.
fn infer_grid(coords: &[(f64, f64)]) -> Result<Grid2D> {
    if coords.len() < 4 {
        return Err(Error::Parse("need at least a 2x2 grid".into()));
    }
    let x1_min = coords[0].0;
    let x2_min = coords[0].1;
    // rows sharing the first x1 value form the first axis-1 slice
    let n2 = coords
        .iter()
        .position(|&(x1, _)| x1 != x1_min)
        .unwrap_or(coords.len());
    if n2 < 2 || !coords.len().is_multiple_of(n2) {
        return Err(Error::Parse(format!("inconsistent row count for n2 = {n2}")));
    }
    let n1 = coords.len() / n2;
    if n1 < 2 {
        return Err(Error::Parse("need n1 >= 2".into()));
    }
    let dx2 = coords[1].1 - x2_min;
    let dx1 = coords[n2].0 - x1_min;
    let grid = Grid2D::new(n1, n2, x1_min, x2_min, dx1, dx2)?;
    for (k, &(x1, x2)) in coords.iter().enumerate() {
        let (k1, k2) = grid.unindex(k);
        let tol1 = 1e-9 * dx1.abs().max(1.0);
        let tol2 = 1e-9 * dx2.abs().max(1.0);
        if (x1 - grid.coord1(k1)).abs() > tol1 || (x2 - grid.coord2(k2)).abs() > tol2 {
            return Err(Error::Parse(format!("row {k} is off the inferred lattice")));
        }
    }
    Ok(grid)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::Truncated(format!("while reading {what}")))
}

fn read_u32<R: Read>(r: &mut R, what: &str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R, what: &str) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b, what)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::rand_signal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_signal(seed: u64) -> QSignal2D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grid2D::new(6, 5, -1.25, 0.5, 0.3, 0.7).unwrap();
        rand_signal(&mut rng, g, 3.0)
    }

    #[test]
    fn qsig_round_trip_is_lossless() {
        let f = sample_signal(1);
        let mut buf = Vec::new();
        write_qsig(&f, &mut buf).unwrap();
        let back = read_qsig(buf.as_slice()).unwrap();
        assert_eq!(back.grid(), f.grid());
        assert_eq!(back.samples(), f.samples());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = sample_signal(2);
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        assert!(back.grid().approx_eq(f.grid()));
        // 17 significant digits reproduce f64 exactly
        assert_eq!(back.samples(), f.samples());
    }

    #[test]
    fn bad_magic_is_reported() {
        let f = sample_signal(3);
        let mut buf = Vec::new();
        write_qsig(&f, &mut buf).unwrap();
        buf[0] = b'X';
        match read_qsig(buf.as_slice()) {
            Err(Error::BadMagic { found, .. }) => assert_eq!(&found, b"XSIG"),
            other => panic!("expected BadMagic, got {other:?}"),
        }
    }

    #[test]
    fn truncation_is_reported() {
        let f = sample_signal(4);
        let mut buf = Vec::new();
        write_qsig(&f, &mut buf).unwrap();
        buf.truncate(buf.len() - 9);
        assert!(matches!(read_qsig(buf.as_slice()), Err(Error::Truncated(_))));
    }

    #[test]
    fn non_finite_payload_rejected() {
        let f = sample_signal(5);
        let mut buf = Vec::new();
        write_qsig(&f, &mut buf).unwrap();
        let off = 4 + 4 + 8 + 4 * 8; // first sample's q0
        buf[off..off + 8].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(matches!(read_qsig(buf.as_slice()), Err(Error::NonFinite(0))));
    }
}
