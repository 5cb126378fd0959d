//! Files: packings, bodies, edge lists and SVG drawings.
//!
//! Packs a triangulation read from an edge list, writes the packing and
//! the body as JSON, reads them back and draws the packing. Output goes to
//! the system temporary directory.
//!
//! ```bash
//! cargo run --example render_and_files
//! ```

use packrigid::body::ConvexBody;
use packrigid::harness::io::{self, parse_edge_list};
use packrigid::harness::write_svg;
use packrigid::packer::{body_pack, ContinuationConfig};
use packrigid::sparsity::Triangulation;

const OCTAHEDRON: &str = "\
# the octahedron graph, outer face 0 1 2
6 12
outer 0 1 2
0 1
1 2
0 2
0 3
0 4
1 4
1 5
2 5
2 3
3 4
4 5
3 5
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = parse_edge_list(OCTAHEDRON)?;
    let pins = file.pins().ok_or("the edge list has no outer face")?;
    let tri = Triangulation::from_graph(file.graph.clone(), Some(pins.vertices))?;
    let body = ConvexBody::pnorm(4.0)?;
    let packing = body_pack(&body, &tri, &pins, &ContinuationConfig::default())?.packing;

    let dir = std::env::temp_dir().join("packrigid-example");
    std::fs::create_dir_all(&dir)?;
    let packing_path = dir.join("octahedron.json");
    io::write_packing(&packing_path, &packing)?;
    io::write_text(&dir.join("body.json"), &io::body_to_json(&body))?;
    let back = io::read_packing(&packing_path)?;
    println!(
        "round trip exact: {}",
        back.p == packing.p && back.r == packing.r
    );

    let svg = dir.join("octahedron.svg");
    write_svg(&svg, &back)?;
    println!("wrote {} and {}", packing_path.display(), svg.display());
    print!(
        "{}",
        io::edge_list_to_string(&back.graph, Some(pins.vertices))
    );
    Ok(())
}
