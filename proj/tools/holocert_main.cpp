// Placeholder main so the scaffold links; replaced by the CLI front-end.
int main() { return 0; }
