import os
from Crypto.Cipher import AES

key = os.urandom(16)
aes = AES.new(key, AES.MODE_ECB)
