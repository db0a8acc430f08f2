//! Bit-serial CRC over `0/1` bit vectors.

use serde::{Deserialize, Serialize};

/// CRC parameters. `poly` is written without the leading `x^width` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrcSpec {
    pub width: u8,
    pub poly: u32,
    pub init: u32,
    /// Process the register LSB-first (reflected algorithm).
    pub reflect: bool,
    pub xor_out: u32,
}

impl CrcSpec {
    /// CRC-8, polynomial 0x07.
    pub const CRC8: CrcSpec = CrcSpec {
        width: 8,
        poly: 0x07,
        init: 0,
        reflect: false,
        xor_out: 0,
    };

    /// CRC-16-CCITT, polynomial 0x1021.
    pub const CRC16: CrcSpec = CrcSpec {
        width: 16,
        poly: 0x1021,
        init: 0,
        reflect: false,
        xor_out: 0,
    };

    pub fn width(&self) -> usize {
        self.width as usize
    }

    fn mask(&self) -> u32 {
        if self.width >= 32 {
            u32::MAX
        } else {
            (1u32 << self.width) - 1
        }
    }

    /// CRC register value after feeding `bits` in order.
    pub fn checksum(&self, bits: &[u8]) -> u32 {
        let mask = self.mask();
        let w = self.width as u32;
        let mut reg = self.init & mask;
        if self.reflect {
            let poly = reflect_bits(self.poly & mask, w);
            for &b in bits {
                let fb = (reg ^ u32::from(b & 1)) & 1;
                reg >>= 1;
                if fb == 1 {
                    reg ^= poly;
                }
            }
        } else {
            let top = 1u32 << (w - 1);
            for &b in bits {
                let fb = ((reg & top) != 0) ^ (b & 1 == 1);
                reg = (reg << 1) & mask;
                if fb {
                    reg ^= self.poly & mask;
                }
            }
        }
        (reg ^ self.xor_out) & mask
    }

    /// Check bits of `payload`, most significant first.
    pub fn check_bits(&self, payload: &[u8]) -> Vec<u8> {
        let crc = self.checksum(payload);
        (0..self.width as u32)
            .rev()
            .map(|i| ((crc >> i) & 1) as u8)
            .collect()
    }

    /// `payload` followed by its check bits.
    pub fn attach(&self, payload: &[u8]) -> Vec<u8> {
        let mut out = payload.to_vec();
        out.extend(self.check_bits(payload));
        out
    }

    /// Whether the trailing `width` bits of `bits` match the CRC of the rest.
    pub fn check(&self, bits: &[u8]) -> bool {
        let w = self.width();
        if bits.len() < w {
            return false;
        }
        let (payload, tail) = bits.split_at(bits.len() - w);
        self.check_bits(payload) == tail
    }
}

fn reflect_bits(v: u32, width: u32) -> u32 {
    (0..width).fold(0, |acc, i| acc | (((v >> i) & 1) << (width - 1 - i)))
}

/// Attaches the CRC of `payload`.
pub fn crc_attach(payload: &[u8], crc: &CrcSpec) -> Vec<u8> {
    crc.attach(payload)
}

pub fn crc_check(bits: &[u8], crc: &CrcSpec) -> bool {
    crc.check(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
        bytes
            .iter()
            .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1))
            .collect()
    }

    // Standard catalogue check values over ASCII "123456789".
    #[test]
    fn catalogue_check_values() {
        let msg = bytes_to_bits(b"123456789");
        assert_eq!(CrcSpec::CRC8.checksum(&msg), 0xF4);
        assert_eq!(CrcSpec::CRC16.checksum(&msg), 0x31C3);
        let kermit = CrcSpec {
            width: 16,
            poly: 0x1021,
            init: 0,
            reflect: true,
            xor_out: 0,
        };
        // reflected CRCs consume each byte LSB first
        let lsb_first: Vec<u8> = b"123456789"
            .iter()
            .flat_map(|&b| (0..8).map(move |i| (b >> i) & 1))
            .collect();
        assert_eq!(kermit.checksum(&lsb_first), 0x2189);
    }

    #[test]
    fn empty_payload() {
        assert_eq!(CrcSpec::CRC16.check_bits(&[]), vec![0; 16]);
        assert_eq!(CrcSpec::CRC8.attach(&[]), vec![0; 8]);
        assert!(CrcSpec::CRC8.check(&[0; 8]));
    }

    #[test]
    fn too_short_fails() {
        assert!(!CrcSpec::CRC16.check(&[0; 5]));
    }
}
