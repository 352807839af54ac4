use super::AssumptionError;

/// Encodes a sequence of naturals as a bit string, each number written in
/// unary zeros and terminated by a one: `[2,1,0]` becomes `001011`. Used as
/// the node-address format when serializing promise paths.
pub fn encode_unary(seq: &[u32]) -> String {
    let mut out = String::new();
    for &n in seq {
        for _ in 0..n {
            out.push('0');
        }
        out.push('1');
    }
    out
}

/// Result of decoding: the completed numbers and the count of trailing
/// zeros from an unterminated final number, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryDecode {
    pub values: Vec<u32>,
    pub pending_zeros: Option<u32>,
}

/// Inverse of [`encode_unary`]. Any string of zeros and ones is a prefix of
/// some valid code; a trailing run of zeros is reported as the partial
/// remainder rather than an error.
pub fn decode_unary(bits: &str) -> Result<UnaryDecode, AssumptionError> {
    let mut values = Vec::new();
    let mut run = 0u32;
    for c in bits.chars() {
        match c {
            '0' => run += 1,
            '1' => {
                values.push(run);
                run = 0;
            }
            _ => return Err(AssumptionError::BadUnaryDigit),
        }
    }
    Ok(UnaryDecode {
        values,
        pending_zeros: (run > 0).then_some(run),
    })
}
