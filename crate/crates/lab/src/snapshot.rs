//! Binary state snapshots.
//!
//! Little-endian layout:
//!
//! ```text
//! offset  size  field
//!      0     5  magic "VDLAB"
//!      5     4  version (u32, currently 1)
//!      9     4  grid n (u32)
//!     13     8  box half-width L (f64)
//!     21     8  mu (f64)
//!     29     8  lambda (f64)
//!     37     8  gamma (f64)
//!     45     8  time t (f64)
//!     53     1  representation (0 physical, 1 spectral)
//!     54     4  component count (u32, 13)
//!     58        payload
//! ```
//!
//! A physical payload holds `13·n³` f64 values, component-major, `x` fastest.
//! A spectral payload holds the half spectrum of each component,
//! `(n/2+1)·n·n` modes with `x` fastest, each written as `re, im`.

use std::io::{Read, Write};
use std::path::Path;

use vdlab_core::{PhysParams, C64};

use crate::error::{LabError, Result};
use crate::grid::GridSpec;
use crate::state::{Fields, Representation, StateU, COMPONENTS};

pub const MAGIC: &[u8; 5] = b"VDLAB";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 58;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotHeader {
    pub version: u32,
    pub n: usize,
    pub box_half_width: f64,
    pub params: PhysParams,
    pub t: f64,
    pub representation: Representation,
    pub components: usize,
}

impl SnapshotHeader {
    pub fn payload_len(&self) -> usize {
        let n = self.n;
        match self.representation {
            Representation::Physical => COMPONENTS * n * n * n * 8,
            Representation::Spectral => COMPONENTS * (n / 2 + 1) * n * n * 16,
        }
    }
}

pub fn encode(u: &StateU, params: &PhysParams) -> Vec<u8> {
    let g = u.grid;
    let mut out = Vec::with_capacity(HEADER_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    for x in [g.box_half_width(), params.mu, params.lambda, params.gamma, u.t] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    let repr = u.representation();
    out.push(match repr {
        Representation::Physical => 0,
        Representation::Spectral => 1,
    });
    out.extend_from_slice(&(COMPONENTS as u32).to_le_bytes());
    match &u.fields {
        Fields::Physical(c) => {
            out.reserve(COMPONENTS * g.points() * 8);
            for x in c.iter().flatten() {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        Fields::Spectral(c) => {
            out.reserve(COMPONENTS * g.modes() * 16);
            for z in c.iter().flatten() {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    out
}

fn format_err(offset: usize, reason: impl Into<String>) -> LabError {
    LabError::Format { offset: offset as u64, reason: reason.into() }
}

fn take<const N: usize>(bytes: &[u8], offset: usize) -> Result<[u8; N]> {
    bytes
        .get(offset..offset + N)
        .map(|s| s.try_into().expect("length checked"))
        .ok_or_else(|| format_err(bytes.len(), format!("truncated header: need {} bytes", offset + N)))
}

pub fn decode_header(bytes: &[u8]) -> Result<SnapshotHeader> {
    let magic: [u8; 5] = take(bytes, 0)?;
    if &magic != MAGIC {
        return Err(format_err(0, "bad magic"));
    }
    let version = u32::from_le_bytes(take(bytes, 5)?);
    if version != VERSION {
        return Err(format_err(5, format!("unsupported version {version}")));
    }
    let n = u32::from_le_bytes(take(bytes, 9)?) as usize;
    let f = |o: usize| -> Result<f64> { Ok(f64::from_le_bytes(take(bytes, o)?)) };
    let (l, mu, lambda, gamma, t) = (f(13)?, f(21)?, f(29)?, f(37)?, f(45)?);
    let representation = match take::<1>(bytes, 53)?[0] {
        0 => Representation::Physical,
        1 => Representation::Spectral,
        other => return Err(format_err(53, format!("unknown representation tag {other}"))),
    };
    let components = u32::from_le_bytes(take(bytes, 54)?) as usize;
    if components != COMPONENTS {
        return Err(format_err(54, format!("expected {COMPONENTS} components, found {components}")));
    }
    GridSpec::new(n, l).map_err(|e| format_err(9, e.to_string()))?;
    Ok(SnapshotHeader {
        version,
        n,
        box_half_width: l,
        params: PhysParams { mu, lambda, gamma },
        t,
        representation,
        components,
    })
}

pub fn decode(bytes: &[u8]) -> Result<(StateU, SnapshotHeader)> {
    let h = decode_header(bytes)?;
    let expected = HEADER_LEN + h.payload_len();
    if bytes.len() < expected {
        return Err(format_err(bytes.len(), format!("truncated payload: expected {expected} bytes")));
    }
    if bytes.len() > expected {
        return Err(format_err(expected, format!("{} trailing bytes", bytes.len() - expected)));
    }
    let grid = GridSpec::new(h.n, h.box_half_width)?;
    let payload = &bytes[HEADER_LEN..];
    let mut words = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")));
    let state = match h.representation {
        Representation::Physical => {
            let len = grid.points();
            let comps = (0..COMPONENTS).map(|_| words.by_ref().take(len).collect()).collect();
            StateU::from_physical(grid, h.t, comps)?
        }
        Representation::Spectral => {
            let len = grid.modes();
            let comps = (0..COMPONENTS)
                .map(|_| (0..len).map(|_| C64::new(words.next().unwrap(), words.next().unwrap())).collect())
                .collect();
            StateU::from_spectral(grid, h.t, comps)?
        }
    };
    Ok((state, h))
}

pub fn write_snapshot(path: &Path, u: &StateU, params: &PhysParams) -> Result<()> {
    let bytes = encode(u, params);
    let mut f = std::fs::File::create(path).map_err(|e| LabError::io(path.display().to_string(), e))?;
    f.write_all(&bytes).map_err(|e| LabError::io(path.display().to_string(), e))
}

pub fn read_snapshot(path: &Path) -> Result<(StateU, SnapshotHeader)> {
    decode(&read_bytes(path)?)
}

/// Header only; reads just the first [`HEADER_LEN`] bytes.
pub fn read_header(path: &Path) -> Result<(SnapshotHeader, u64)> {
    let ctx = || path.display().to_string();
    let mut f = std::fs::File::open(path).map_err(|e| LabError::io(ctx(), e))?;
    let size = f.metadata().map_err(|e| LabError::io(ctx(), e))?.len();
    let mut head = Vec::with_capacity(HEADER_LEN);
    Read::by_ref(&mut f).take(HEADER_LEN as u64).read_to_end(&mut head).map_err(|e| LabError::io(ctx(), e))?;
    Ok((decode_header(&head)?, size))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| LabError::io(path.display().to_string(), e))
}
