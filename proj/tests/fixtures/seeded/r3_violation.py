import os
from Crypto.Cipher import AES

iv = os.urandom(16)
aes = AES.new(b"\x00" * 32, AES.MODE_CBC, iv)
