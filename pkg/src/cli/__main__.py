from src.cli.commands import main

main()
