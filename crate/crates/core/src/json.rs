use num_bigint::BigInt;
use serde_json::{Number, Value};

/// Exact JSON number for an arbitrary-precision integer.
pub(crate) fn big_to_json(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("integer literal"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_values_stay_exact() {
        let v = BigInt::from(3u32).pow(72);
        assert_eq!(big_to_json(&v).to_string(), v.to_string());
        assert_eq!(big_to_json(&BigInt::from(-7)).to_string(), "-7");
    }
}
