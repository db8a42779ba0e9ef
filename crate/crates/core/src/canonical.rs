//! Canonical JSON: object keys sorted, compact separators, integers printed
//! exactly. Equal values always produce identical bytes.

use serde::Serialize;

pub fn to_canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // `Value` objects are B-tree maps, so re-serializing sorts every key.
    let value = serde_json::to_value(value)?;
    serde_json::to_string(&value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_big_integers_exact() {
        #[derive(Serialize)]
        struct Sample {
            zeta: u8,
            alpha: u128,
        }
        let text = to_canonical_json(&Sample {
            zeta: 1,
            alpha: 696_729_600u128 * 1_000_000_000_000,
        })
        .unwrap();
        assert_eq!(text, r#"{"alpha":696729600000000000000,"zeta":1}"#);
        let reparsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(to_canonical_json(&reparsed).unwrap(), text);
        assert_eq!(
            to_canonical_json(&json!({"b": [2, 1], "a": null})).unwrap(),
            r#"{"a":null,"b":[2,1]}"#
        );
    }
}
