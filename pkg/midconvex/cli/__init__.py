from .app import app


def main() -> None:
    app()
