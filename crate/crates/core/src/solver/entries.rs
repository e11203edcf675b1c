//! Serializes integer-keyed maps as `[key, value]` pairs, which survive
//! internally tagged enums where string-keyed JSON objects do not.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<V: Serialize, S: Serializer>(
    map: &BTreeMap<u64, V>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(map.iter())
}

pub fn deserialize<'de, V: Deserialize<'de>, D: Deserializer<'de>>(
    d: D,
) -> Result<BTreeMap<u64, V>, D::Error> {
    Ok(Vec::<(u64, V)>::deserialize(d)?.into_iter().collect())
}
