from cubeiso.cli import main

main()
