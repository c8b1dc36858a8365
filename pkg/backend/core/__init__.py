# Core coding, decoding and simulation packages
