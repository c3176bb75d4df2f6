//! Binary weight archive.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic            9 bytes  "EPICTRL-W"
//! version          u32      currently 1
//! sizes            6 x u32  input_features, window, hidden, dense,
//!                           actions, recurrent_layers
//! tensor count     u32
//! per tensor       name_len u32, name bytes, rank u32, dims u32 x rank,
//!                  data f64 x product(dims), row-major
//! checksum         u64      FNV-1a 64 of every preceding byte
//! ```
//!
//! Tensors appear in the canonical order of [`Network::tensor_entries`]
//! and values are stored as f64 regardless of the in-memory scalar.

use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Network, NetworkSizes};

pub const MAGIC: &[u8; 9] = b"EPICTRL-W";
pub const VERSION: u32 = 1;

/// FNV-1a 64-bit hash.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn network_to_bytes<T: Scalar>(net: &Network<T>) -> Vec<u8> {
    let sizes = net.sizes();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for v in [
        sizes.input_features,
        sizes.window,
        sizes.hidden,
        sizes.dense,
        sizes.actions,
        sizes.recurrent_layers,
    ] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    let entries = net.tensor_entries();
    out.extend_from_slice(&(entries.len() as u32).to_le_bytes());
    for entry in entries {
        out.extend_from_slice(&(entry.name.len() as u32).to_le_bytes());
        out.extend_from_slice(entry.name.as_bytes());
        out.extend_from_slice(&(entry.dims.len() as u32).to_le_bytes());
        for d in &entry.dims {
            out.extend_from_slice(&(*d as u32).to_le_bytes());
        }
        for &v in entry.data {
            out.extend_from_slice(&v.to_f().to_le_bytes());
        }
    }
    let checksum = fnv1a64(&out);
    out.extend_from_slice(&checksum.to_le_bytes());
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let remaining = self.bytes.len() - self.pos;
        if n > remaining {
            return Err(Error::Format(format!(
                "archive truncated reading {what}: needed {n} bytes, {remaining} remaining"
            )));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let raw = self.take(4, what)?;
        Ok(u32::from_le_bytes(raw.try_into().expect("4-byte slice")))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        let raw = self.take(8, what)?;
        Ok(f64::from_le_bytes(raw.try_into().expect("8-byte slice")))
    }
}

pub fn network_from_bytes<T: Scalar>(bytes: &[u8]) -> Result<Network<T>> {
    if bytes.len() < 8 {
        return Err(Error::Format(format!(
            "archive is {} bytes, too short to hold a checksum",
            bytes.len()
        )));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().expect("8-byte slice"));
    let computed = fnv1a64(body);
    if stored != computed {
        return Err(Error::Format(format!(
            "archive checksum mismatch: stored {stored:#018x}, computed {computed:#018x}"
        )));
    }

    let mut r = Reader { bytes: body, pos: 0 };
    let magic = r.take(MAGIC.len(), "magic")?;
    if magic != MAGIC {
        return Err(Error::Format(format!(
            "bad archive magic {:?}, expected {:?}",
            String::from_utf8_lossy(magic),
            String::from_utf8_lossy(MAGIC)
        )));
    }
    let version = r.u32("version")?;
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported archive version {version}, expected {VERSION}"
        )));
    }
    let sizes = NetworkSizes {
        input_features: r.u32("input_features")? as usize,
        window: r.u32("window")? as usize,
        hidden: r.u32("hidden")? as usize,
        dense: r.u32("dense")? as usize,
        actions: r.u32("actions")? as usize,
        recurrent_layers: r.u32("recurrent_layers")? as usize,
    };
    sizes
        .validate()
        .map_err(|e| Error::Format(format!("archive header invalid: {e}")))?;

    let count = r.u32("tensor count")? as usize;
    let expected_count = 6 * sizes.recurrent_layers + 4;
    if count != expected_count {
        return Err(Error::Format(format!(
            "archive lists {count} tensors, expected {expected_count}"
        )));
    }

    let mut net = Network::<T>::zeros(sizes)?;
    for (idx, entry) in net.tensor_entries_mut().into_iter().enumerate() {
        let name_len = r.u32("tensor name length")? as usize;
        let raw_name = r.take(name_len, "tensor name")?;
        let name = std::str::from_utf8(raw_name)
            .map_err(|_| Error::Format(format!("tensor {idx} name is not valid UTF-8")))?;
        if name != entry.name {
            return Err(Error::Format(format!(
                "tensor {idx} named {name:?}, expected {:?}",
                entry.name
            )));
        }
        let rank = r.u32("tensor rank")? as usize;
        let mut dims = Vec::with_capacity(rank);
        for _ in 0..rank {
            dims.push(r.u32("tensor dimension")? as usize);
        }
        if dims != entry.dims {
            return Err(Error::Format(format!(
                "tensor {:?} has shape {dims:?}, expected {:?}",
                entry.name, entry.dims
            )));
        }
        for slot in entry.data.iter_mut() {
            *slot = T::from_f(r.f64("tensor data")?);
        }
    }
    let leftover = body.len() - r.pos;
    if leftover != 0 {
        return Err(Error::Format(format!(
            "archive has {leftover} unexpected bytes after the last tensor"
        )));
    }
    Ok(net)
}

pub fn save_network<T: Scalar>(path: impl AsRef<Path>, net: &Network<T>) -> Result<()> {
    std::fs::write(path, network_to_bytes(net))?;
    Ok(())
}

pub fn load_network<T: Scalar>(path: impl AsRef<Path>) -> Result<Network<T>> {
    let bytes = std::fs::read(path)?;
    network_from_bytes(&bytes)
}
