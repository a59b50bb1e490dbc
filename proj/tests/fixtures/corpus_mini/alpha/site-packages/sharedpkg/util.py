from Crypto.Cipher import AES

SECRET = b"\x10" * 16


def connect():
    return AES.new(SECRET, AES.MODE_CTR)


connect()
