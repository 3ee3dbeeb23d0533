"""The fixed 256-entry colormap used by the overlay renderer.

A piecewise-linear heat ramp (near-black, purple, crimson, orange, pale
yellow) shipped as a literal byte table so renders are bit-stable across
platforms and library versions.
"""

import numpy as np

_TABLE_HEX = (
    "00000401000603010704010905010b07010c08020e0a02100b02110c02130e03150f031610031812031a13041b14041d"
    "16041f1704201905221a05241b05251d05271e06291f062a21062c22062e23072f2507312607332807342908362a0838"
    "2c08392d083b2e093d30093e310940320942340a43350a45370a47380a48390b4a3b0b4b3c0b4d3d0b4f3f0c50400c52"
    "420c54430c55440d57460d59470d5a480d5c4a0e5e4b0e5f4c0e614e0e634f0f64510f66520f68530f6955106b56106d"
    "57106e59116d5b116d5c126d5e136c5f136c61146b62146b64156b66166a67166a6917696a17696c18696e19686f1968"
    "711a67721b67741b67751c66771c66791d657a1e657c1e657d1f647f1f64812063822163842162852262872362892361"
    "8a24618c24608d25608f266090265f92275f94275e95285e97295e98295d9a2a5d9c2a5c9d2b5c9f2c5ca02c5ba22d5b"
    "a32e5aa52e5aa72f5aa82f59aa3059ab3158ad3158af3257b03257b23357b33456b53456b63555b83555ba3655bb3754"
    "bc3853bd3952be3a51bf3c50c03d4fc13f4ec2404cc3414bc4434ac54449c64548c74746c84845c94944ca4b43cb4c42"
    "cc4e41cd4f3fce503ecf523dd0533cd1543bd2563ad25738d35837d45a36d55b35d65d34d75e32d85f31d96130da622f"
    "db632edc652ddd662bde672adf6929e06a28e16c27e26d26e36e24e47023e57122e67221e77420e8751ee8761de9781c"
    "ea791beb7b1aec7c19ed7d17ee7f16ef8015f08114f18313f28412f38510f4870ff5880ef68a0df78b0cf88c0af98e09"
    "f98f0bf9910df99310f99512f99615f99817f99a19f99c1cf99e1ef99f21faa123faa326faa528faa62afaa82dfaaa2f"
    "faac32faad34faaf37fab139fab33bfab53efab640fab843faba45fabc48fabd4afabf4cfac14ffac351fac554fac656"
    "fbc859fbca5bfbcc5dfbcd60fbcf62fbd165fbd367fbd46afbd66cfbd86ffbda71fbdc73fbdd76fbdf78fbe17bfbe37d"
    "fbe480fbe682fbe884fbea87fbec89fced8cfcef8efcf191fcf393fcf495fcf698fcf89afcfa9dfcfb9ffcfda2fcffa4"
)

COLORMAP = np.frombuffer(bytes.fromhex(_TABLE_HEX), dtype=np.uint8).reshape(256, 3)
COLORMAP.setflags(write=False)
