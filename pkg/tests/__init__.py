# Test package for pynnls
