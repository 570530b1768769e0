fn main() {
    println!("norc");
}
