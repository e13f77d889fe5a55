//! Difference coding for ascending tid lists.
//!
//! A list is stored as its first id followed by successive differences.
//! The optional byte form packs each value as a little-endian varint
//! (7 data bits per byte, high bit marks continuation), so small gaps
//! occupy a single byte.

use crate::db::Tid;
use crate::{Error, Result};

/// Encodes a strictly increasing sequence as first-value-plus-gaps.
pub fn delta_encode(tids: &[Tid]) -> Result<Vec<Tid>> {
    check_ascending(tids)?;
    let mut out = Vec::with_capacity(tids.len());
    let mut prev = 0;
    for &tid in tids {
        out.push(tid - prev);
        prev = tid;
    }
    Ok(out)
}

/// Inverse of [`delta_encode`].
pub fn delta_decode(deltas: &[Tid]) -> Result<Vec<Tid>> {
    let mut out = Vec::with_capacity(deltas.len());
    let mut acc: Tid = 0;
    for &d in deltas {
        if d == 0 {
            return Err(Error::Encode("zero gap in delta sequence".into()));
        }
        acc = acc
            .checked_add(d)
            .ok_or_else(|| Error::Encode("tid overflow while decoding".into()))?;
        out.push(acc);
    }
    Ok(out)
}

/// Delta-encodes and packs each value in the minimum number of varint bytes.
pub fn varint_delta_encode(tids: &[Tid]) -> Result<Vec<u8>> {
    check_ascending(tids)?;
    let mut out = Vec::with_capacity(tids.len());
    let mut prev = 0;
    for &tid in tids {
        push_varint(&mut out, tid - prev);
        prev = tid;
    }
    Ok(out)
}

/// Inverse of [`varint_delta_encode`].
pub fn varint_delta_decode(bytes: &[u8]) -> Result<Vec<Tid>> {
    let mut out = Vec::new();
    let mut pos = 0;
    let mut acc: Tid = 0;
    while pos < bytes.len() {
        let d = read_varint(bytes, &mut pos)
            .ok_or_else(|| Error::Encode("truncated varint sequence".into()))?;
        if d == 0 {
            return Err(Error::Encode("zero gap in delta sequence".into()));
        }
        acc = acc
            .checked_add(d)
            .ok_or_else(|| Error::Encode("tid overflow while decoding".into()))?;
        out.push(acc);
    }
    Ok(out)
}

#[inline]
pub(crate) fn push_varint(out: &mut Vec<u8>, mut v: u32) {
    while v >= 0x80 {
        out.push((v as u8 & 0x7f) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

#[inline]
pub(crate) fn read_varint(bytes: &[u8], pos: &mut usize) -> Option<u32> {
    let mut v: u32 = 0;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos)?;
        *pos += 1;
        v |= u32::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return Some(v);
        }
        shift += 7;
        if shift > 28 {
            return None;
        }
    }
}

fn check_ascending(tids: &[Tid]) -> Result<()> {
    let mut prev = 0;
    for &tid in tids {
        if tid <= prev {
            return Err(Error::Encode(format!("sequence not strictly increasing at {tid}")));
        }
        prev = tid;
    }
    Ok(())
}
