//! Byte-to-symbol packing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Packing {
    /// One byte per symbol; needs `q > 255`.
    Byte,
    /// One 4-bit nibble per symbol, low nibble first; needs `q > 15`.
    Nibble,
}

impl Packing {
    pub fn for_modulus(q: u32) -> Result<Self> {
        match q {
            256.. => Ok(Packing::Byte),
            16..=255 => Ok(Packing::Nibble),
            _ => Err(Error::PackingUnsupported(q)),
        }
    }

    pub fn symbols_per_byte(self) -> usize {
        match self {
            Packing::Byte => 1,
            Packing::Nibble => 2,
        }
    }

    pub fn pack(self, bytes: &[u8]) -> Vec<u32> {
        match self {
            Packing::Byte => bytes.iter().map(|&b| b as u32).collect(),
            Packing::Nibble => bytes
                .iter()
                .flat_map(|&b| [(b & 0x0f) as u32, (b >> 4) as u32])
                .collect(),
        }
    }

    /// Inverse of [`Packing::pack`]. Fails on symbols that no byte could
    /// have produced.
    pub fn unpack(self, symbols: &[u32]) -> Result<Vec<u8>> {
        let bad = |s: u32| Error::ShardFormat(format!("symbol {s} does not decode to packed data"));
        match self {
            Packing::Byte => symbols
                .iter()
                .map(|&s| u8::try_from(s).map_err(|_| bad(s)))
                .collect(),
            Packing::Nibble => {
                if !symbols.len().is_multiple_of(2) {
                    return Err(Error::ShardFormat("odd number of nibble symbols".into()));
                }
                symbols
                    .chunks_exact(2)
                    .map(|p| {
                        if p[0] > 15 {
                            Err(bad(p[0]))
                        } else if p[1] > 15 {
                            Err(bad(p[1]))
                        } else {
                            Ok((p[0] | (p[1] << 4)) as u8)
                        }
                    })
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn packing_depends_on_modulus() {
        assert_eq!(Packing::for_modulus(257).unwrap(), Packing::Byte);
        assert_eq!(Packing::for_modulus(17).unwrap(), Packing::Nibble);
        assert_eq!(Packing::for_modulus(251).unwrap(), Packing::Nibble);
        assert!(matches!(Packing::for_modulus(13), Err(Error::PackingUnsupported(13))));
    }

    #[test]
    fn nibble_order() {
        assert_eq!(Packing::Nibble.pack(&[0xab]), vec![0xb, 0xa]);
        assert!(Packing::Nibble.unpack(&[16, 0]).is_err());
        assert!(Packing::Byte.unpack(&[256]).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip(bytes in prop::collection::vec(any::<u8>(), 0..64)) {
            for p in [Packing::Byte, Packing::Nibble] {
                prop_assert_eq!(p.unpack(&p.pack(&bytes)).unwrap(), bytes.clone());
            }
        }
    }
}
