//! Regenerates `data/facts.json` from the fact builder.

fn main() -> minmat::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/facts.json");
    let table = minmat::known::build()?;
    std::fs::write(path, table.to_json()).map_err(|e| minmat::Error::ParseError(format!("{path}: {e}")))?;
    println!("wrote {} facts to {path}", table.len());
    Ok(())
}
