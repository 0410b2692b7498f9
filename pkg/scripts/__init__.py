# Makes the scripts folder importable as a package so you can run
#   python -m scripts.reproduce_examples
