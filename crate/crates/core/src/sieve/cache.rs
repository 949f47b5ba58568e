//! On-disk checkpoint cache.
//!
//! Layout (little-endian): `b"PIPC"`, version byte `0x01`, `u64` stride,
//! `u64` count, then `count` primes. Entry `c` (0-based) is the prime with
//! index `(c + 1) * stride`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"PIPC";
pub const VERSION: u8 = 0x01;

/// Default number of primes between consecutive checkpoints.
pub const DEFAULT_STRIDE: u64 = 10_000_000;

/// Every `stride`-th prime, starting with p_stride.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoints {
    stride: u64,
    primes: Vec<u64>,
}

/// A single (index, value) checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeCheckpoint {
    pub index: u64,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheSummary {
    pub count: u64,
    pub max: u64,
    pub stride: u64,
    pub checkpoints: u64,
}

impl Checkpoints {
    pub fn new(stride: u64, primes: Vec<u64>) -> Result<Self> {
        if stride == 0 {
            return Err(Error::Cache("stride must be positive".into()));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Cache("checkpoints are not strictly increasing".into()));
        }
        Ok(Checkpoints { stride, primes })
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = PrimeCheckpoint> + '_ {
        self.primes.iter().enumerate().map(|(c, &value)| PrimeCheckpoint {
            index: (c as u64 + 1) * self.stride,
            value,
        })
    }

    /// Last checkpoint whose index is strictly below `index`.
    pub fn below_index(&self, index: u64) -> Option<PrimeCheckpoint> {
        let c = (index.saturating_sub(1) / self.stride).min(self.primes.len() as u64);
        (c > 0).then(|| PrimeCheckpoint {
            index: c * self.stride,
            value: self.primes[c as usize - 1],
        })
    }

    /// Last checkpoint whose value is `<= x`.
    pub fn at_or_below_value(&self, x: u64) -> Option<PrimeCheckpoint> {
        let c = self.primes.partition_point(|&p| p <= x);
        (c > 0).then(|| PrimeCheckpoint {
            index: c as u64 * self.stride,
            value: self.primes[c - 1],
        })
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&[VERSION])?;
        w.write_all(&self.stride.to_le_bytes())?;
        w.write_all(&(self.primes.len() as u64).to_le_bytes())?;
        for p in &self.primes {
            w.write_all(&p.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut head = [0u8; 5];
        r.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        if head[4] != VERSION {
            return Err(Error::Cache(format!("unsupported version {:#04x}", head[4])));
        }
        let stride = read_u64(&mut r)?;
        let count = read_u64(&mut r)?;
        let mut primes = Vec::with_capacity(count.min(1 << 24) as usize);
        for _ in 0..count {
            primes.push(read_u64(&mut r)?);
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::Cache("trailing bytes after checkpoints".into()));
        }
        Checkpoints::new(stride, primes)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Checkpoints::read_from(BufReader::new(File::open(path)?))
    }
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Cache("truncated file".into()),
        _ => Error::Io(e),
    })?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_layout() {
        let cp = Checkpoints::new(2, vec![3, 7]).unwrap();
        let mut buf = Vec::new();
        cp.write_to(&mut buf).unwrap();
        let mut want = b"PIPC\x01".to_vec();
        want.extend_from_slice(&2u64.to_le_bytes());
        want.extend_from_slice(&2u64.to_le_bytes());
        want.extend_from_slice(&3u64.to_le_bytes());
        want.extend_from_slice(&7u64.to_le_bytes());
        assert_eq!(buf, want);
        assert_eq!(Checkpoints::read_from(&buf[..]).unwrap(), cp);
    }

    #[test]
    fn rejects_corruption() {
        assert!(matches!(Checkpoints::read_from(&b"PIPX\x01"[..]), Err(Error::Cache(_))));
        assert!(matches!(Checkpoints::read_from(&b"PIPC\x02"[..]), Err(Error::Cache(_))));
        let mut buf = Vec::new();
        Checkpoints::new(5, vec![11, 29]).unwrap().write_to(&mut buf).unwrap();
        assert!(Checkpoints::read_from(&buf[..buf.len() - 1]).is_err());
        buf.push(0);
        assert!(Checkpoints::read_from(&buf[..]).is_err());
        assert!(Checkpoints::new(3, vec![5, 5]).is_err());
    }

    #[test]
    fn lookups() {
        // p_2 = 3, p_4 = 7, p_6 = 13
        let cp = Checkpoints::new(2, vec![3, 7, 13]).unwrap();
        assert_eq!(cp.below_index(1), None);
        assert_eq!(cp.below_index(2), None);
        assert_eq!(cp.below_index(3), Some(PrimeCheckpoint { index: 2, value: 3 }));
        assert_eq!(cp.below_index(100), Some(PrimeCheckpoint { index: 6, value: 13 }));
        assert_eq!(cp.at_or_below_value(2), None);
        assert_eq!(cp.at_or_below_value(7), Some(PrimeCheckpoint { index: 4, value: 7 }));
        assert_eq!(cp.at_or_below_value(12), Some(PrimeCheckpoint { index: 4, value: 7 }));
    }
}
