use pgtower_wasm_demo::*;
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn lists_the_cases() {
    let v = parse(&case_list_json());
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_eq!(v[0]["params"], serde_json::json!(["r", "s", "t"]));
}

#[test]
fn final_group_by_parameters() {
    let v = parse(&final_group_json("-2379", r#"{"r": 1, "t": 1}"#).unwrap());
    assert_eq!(v["order_log"], 11);
    assert_eq!(v["class"], 5);
    assert_eq!(v["params"]["s"], 0);
    assert_eq!(v["derived"], serde_json::json!(["[4,4]", "[2,4,16]"]));
    assert_eq!(v["chain"].as_array().unwrap().len(), 5);
    assert!(final_group_json("-2379", r#"{"r": 2}"#).is_err());
    assert!(final_group_json("-1", "").is_err());
}

#[test]
fn trees() {
    let v = parse(&descendant_tree_json("p=2 n=2 d=2", 4, 8).unwrap());
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.iter().filter(|n| n["order_log"] == 3).count(), 3);
    assert_eq!(v["status"], "cap-hit");
    let v = parse(&descendant_tree_json("p=2 n=3 d=2\nx1^2 = x3\nx2^2 = x3\n[x2,x1] = x3", 6, 8).unwrap());
    // Q8 is terminal
    assert_eq!(v["nodes"].as_array().unwrap().len(), 1);
    assert_eq!(v["status"], "terminated");
    let v = parse(&case_tree_json("-445", 1, 6, 2).unwrap());
    assert_eq!(v["nodes"].as_array().unwrap().iter().filter(|n| n["class"] == 2).count(), 3);
    assert!(descendant_tree_json("p=2 n=2", 1, 3).is_err());
}
