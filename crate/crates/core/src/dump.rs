//! Point and root export formats.
//!
//! Binary point dumps are little-endian:
//!
//! ```text
//! magic    4 bytes  "LWZS"
//! version  u32      1
//! count    u64      number of points
//! payload  count × (f64 re, f64 im)
//! ```
//!
//! CSV output prints floats with Rust's shortest round-trip formatting,
//! so a CSV and a binary dump of the same run decode to identical values.

use std::io::{self, BufRead, Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zeros::RootRecord;

pub const MAGIC: [u8; 4] = *b"LWZS";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointDumpHeader {
    pub version: u32,
    pub count: u64,
}

impl PointDumpHeader {
    pub fn to_bytes(self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4..8].copy_from_slice(&self.version.to_le_bytes());
        out[8..].copy_from_slice(&self.count.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8; HEADER_LEN]) -> Result<Self> {
        if bytes[..4] != MAGIC {
            return Err(Error::MalformedDump("bad magic".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::MalformedDump(format!("unsupported version {version}")));
        }
        let count = u64::from_le_bytes(bytes[8..].try_into().unwrap());
        Ok(PointDumpHeader { version, count })
    }
}

/// Writes a header declaring `count` points. Pair with [`write_point`].
pub fn write_dump_header<W: Write>(out: &mut W, count: u64) -> io::Result<()> {
    out.write_all(
        &PointDumpHeader {
            version: VERSION,
            count,
        }
        .to_bytes(),
    )
}

#[inline]
pub fn write_point<W: Write>(out: &mut W, z: Complex64) -> io::Result<()> {
    out.write_all(&z.re.to_le_bytes())?;
    out.write_all(&z.im.to_le_bytes())
}

pub fn write_point_dump<W: Write>(mut out: W, points: &[Complex64]) -> io::Result<()> {
    write_dump_header(&mut out, points.len() as u64)?;
    for &z in points {
        write_point(&mut out, z)?;
    }
    Ok(())
}

/// Reads a whole dump, checking that the payload matches the header.
pub fn read_point_dump<R: Read>(mut input: R) -> Result<Vec<Complex64>> {
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|_| Error::MalformedDump("truncated header".into()))?;
    let header = PointDumpHeader::from_bytes(&header)?;
    let mut payload = Vec::new();
    input.read_to_end(&mut payload)?;
    if payload.len() as u128 != header.count as u128 * 16 {
        return Err(Error::MalformedDump(format!(
            "header declares {} points but payload holds {} bytes",
            header.count,
            payload.len()
        )));
    }
    Ok(payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}

pub const POINT_CSV_HEADER: &str = "re,im";
pub const ROOT_CSV_HEADER: &str = "degree,mask,re,im,residual,converged";

pub fn write_points_csv<W: Write>(mut out: W, points: &[Complex64]) -> io::Result<()> {
    writeln!(out, "{POINT_CSV_HEADER}")?;
    for z in points {
        writeln!(out, "{},{}", z.re, z.im)?;
    }
    Ok(())
}

/// Parses the leading `re,im` columns of a point CSV; extra columns are
/// ignored.
pub fn read_points_csv<R: BufRead>(input: R) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if i == 0 || line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let mut next = || -> Result<f64> {
            cols.next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::MalformedDump(format!("line {}: {line:?}", i + 1)))
        };
        let re = next()?;
        let im = next()?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

#[inline]
pub fn write_root_csv_row<W: Write>(out: &mut W, r: &RootRecord) -> io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{}",
        r.degree, r.mask, r.root.re, r.root.im, r.residual, r.converged
    )
}

pub fn read_roots_csv<R: BufRead>(input: R) -> Result<Vec<RootRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if i == 0 || line.is_empty() {
            continue;
        }
        let bad = || Error::MalformedDump(format!("line {}: {line:?}", i + 1));
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(bad());
        }
        out.push(RootRecord {
            degree: cols[0].parse().map_err(|_| bad())?,
            mask: cols[1].parse().map_err(|_| bad())?,
            root: Complex64::new(cols[2].parse().map_err(|_| bad())?, cols[3].parse().map_err(|_| bad())?),
            residual: cols[4].parse().map_err(|_| bad())?,
            converged: cols[5].parse().map_err(|_| bad())?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let bytes = PointDumpHeader { version: 1, count: 3 }.to_bytes();
        assert_eq!(&bytes[..4], b"LWZS");
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(&bytes[8..], &[3, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_dumps() {
        let mut buf = Vec::new();
        write_point_dump(&mut buf, &[Complex64::new(1.0, 2.0)]).unwrap();
        assert!(read_point_dump(&buf[..buf.len() - 1]).is_err());
        let mut wrong = buf.clone();
        wrong[0] = b'X';
        assert!(read_point_dump(&wrong[..]).is_err());
        let mut extra = buf.clone();
        extra.push(0);
        assert!(read_point_dump(&extra[..]).is_err());
        assert!(read_point_dump(&buf[..10]).is_err());
    }

    proptest! {
        #[test]
        fn csv_and_binary_agree(raw in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 0..64)) {
            let pts: Vec<Complex64> = raw.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let mut bin = Vec::new();
            write_point_dump(&mut bin, &pts).unwrap();
            let mut csv = Vec::new();
            write_points_csv(&mut csv, &pts).unwrap();
            let from_bin = read_point_dump(&bin[..]).unwrap();
            let from_csv = read_points_csv(&csv[..]).unwrap();
            prop_assert_eq!(&from_bin, &pts);
            prop_assert_eq!(&from_csv, &pts);
        }
    }

    #[test]
    fn root_csv_round_trip() {
        let rec = RootRecord {
            root: Complex64::new(-0.5, 0.8660254037844386),
            mask: 0,
            degree: 2,
            residual: 1.1102230246251565e-16,
            converged: true,
        };
        let mut buf = format!("{ROOT_CSV_HEADER}\n").into_bytes();
        write_root_csv_row(&mut buf, &rec).unwrap();
        assert_eq!(read_roots_csv(&buf[..]).unwrap(), vec![rec]);
    }
}
