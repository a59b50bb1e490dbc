import os
from Crypto.Cipher import AES
from Crypto.Protocol.KDF import PBKDF2

c1 = AES.new(os.urandom(16), AES.MODE_ECB)
c2 = AES.new(os.urandom(16), AES.MODE_CBC, b"\x00" * 16)
c3 = AES.new(b"\x05" * 16, AES.MODE_CTR)
k1 = PBKDF2(b"pw", b"\x06" * 8, 16, 1000)
k2 = PBKDF2(b"pw", os.urandom(8), 16, 200)
