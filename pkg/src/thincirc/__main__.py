from thincirc.cli import main

main()
